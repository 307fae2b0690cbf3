#pragma once

#include <map>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "mused/rng.hpp"
#include "mused/treegen.hpp"
#include "mused/types.hpp"

namespace mused {

struct PromptRecord {
    std::string id;
    std::string text;
    ResponseMode mode = ResponseMode::Natural;
    QuestionType question_type = QuestionType::Proof;
    std::size_t level = 0;
    std::size_t noise_count = 0;
    /// Everything the scorer needs; written to the gold file.
    PromptInstance gold;
};

/// Contradictory of p (A<->O, E<->I), same subject and predicate.
Proposition negate_proposition(const Proposition& p);

/// Sentence frame without trailing period, e.g. "There is one ALPHA that is not BETA".
std::string render_proposition(const Proposition& p, const std::map<TermId, std::string>& grounded);

/// Flips the presented conclusion to its negation with probability 0.5 and
/// records the matching gold verdict.
PromptInstance pose_judgment(PromptInstance instance, Rng& rng);

PromptRecord render_proof(const PromptInstance& instance);

/// Requires instance.gold_verdict (see pose_judgment).
PromptRecord render_judgment(const PromptInstance& instance);
PromptRecord render_judgment(const PromptInstance& instance, Rng& rng);

/// Proof or judgment, whichever the instance asks for.
PromptRecord render(const PromptInstance& instance);

/// Few-shot JSON answer instructions for the question type. Identical bytes
/// for every prompt of that type.
std::string_view format_instructions(QuestionType type);

/// Wraps a natural record in the formatted-answer instructions. Records that
/// are already formatted come back unchanged (with a warning).
PromptRecord attach_format_instructions(PromptRecord record);

/// Reference derivation in the formatted-answer JSON shape.
std::string gold_formatted_response(const PromptInstance& instance);
/// Reference derivation as plain sentences.
std::string gold_natural_response(const PromptInstance& instance);

nlohmann::json proposition_to_json(const Proposition& p);
Proposition proposition_from_json(const nlohmann::json& j);

nlohmann::json instance_to_json(const PromptInstance& instance);
/// Throws ConfigError on schema violations.
PromptInstance instance_from_json(const nlohmann::json& j);

/// Prompt file row: the record without its gold payload.
nlohmann::json prompt_to_json(const PromptRecord& record);
PromptRecord prompt_from_json(const nlohmann::json& j);

/// Gold file row: the instance plus the response mode it was rendered for.
nlohmann::json gold_to_json(const PromptRecord& record);

struct GoldEntry {
    ResponseMode mode = ResponseMode::Natural;
    PromptInstance instance;
};
GoldEntry gold_from_json(const nlohmann::json& j);

}  // namespace mused
