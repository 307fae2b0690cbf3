#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "mused/closure.hpp"
#include "mused/parsing.hpp"
#include "mused/treegen.hpp"

namespace mused {

struct ReferenceTables {
    /// Closure of the essential leaves only.
    RelationTable relation;
    /// Closure of leaves plus noise conditions.
    RelationTable noise_relation;
    TermSet all_middles;
    Proposition root;
    std::optional<Verdict> gold_verdict;
    /// Lowercased surface -> term.
    std::unordered_map<std::string, TermId> by_surface;
};

ReferenceTables build_reference(const PromptInstance& instance);

struct ScoreVector {
    double step_score = 0.0;
    int result_score = 0;
    int intent_score = 0;
    int wrong_steps = 0;
    int noise_steps = 0;
    int extra_steps = 0;

    friend bool operator==(const ScoreVector&, const ScoreVector&) = default;
};

enum class StepClass { CorrectNew, Extra, Wrong, Noise };

struct ScoreDetail {
    ScoreVector scores;
    std::vector<StepClass> classes;
    TermSet eliminated;
    bool proved_conclusion_seen = false;
};

/// Walks the steps in order, crediting each verified step with the middle
/// terms it newly eliminates.
ScoreDetail score_detailed(const ParsedResponse& parsed, const ReferenceTables& ref, QuestionType question_type);

ScoreVector score(const ParsedResponse& parsed, const ReferenceTables& ref, QuestionType question_type);

nlohmann::json scores_to_json(const ScoreVector& s);
ScoreVector scores_from_json(const nlohmann::json& j);

}  // namespace mused
