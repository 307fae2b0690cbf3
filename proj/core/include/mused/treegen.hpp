#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "mused/closure.hpp"
#include "mused/rng.hpp"
#include "mused/syllogism.hpp"
#include "mused/types.hpp"

namespace mused {

/// One backward expansion: `conclusion` was split into two premises around
/// a fresh middle term.
struct TreeNode {
    Proposition conclusion;
    const SyllogismMood* mood = nullptr;
    TermId middle{};
    Proposition major;
    Proposition minor;
};

struct LogicTree {
    Proposition root;
    /// Expansion order; replaying it backwards rebuilds the root.
    std::vector<TreeNode> nodes;
    std::vector<Proposition> leaves;
    int level = 0;

    TermSet middle_terms() const;
    /// Root terms plus middle terms.
    TermSet terms() const;
};

/// Root subject and predicate ids; middles are numbered after them.
inline constexpr TermId kRootSubject = term(0);
inline constexpr TermId kRootPredicate = term(1);

struct GeneratorLimits {
    int max_level = 10;
    std::size_t max_noise = 7;
    int noise_retries = 50;
    int tree_retries = 20;
};

class GenerationFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class LexiconExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

LogicTree generate_tree(int level, Rng& rng, const GeneratorLimits& limits = {});

/// Distractor conditions, each linking one tree term to a fresh term. They
/// never contradict the leaves and never shorten the root derivation.
std::vector<Proposition> inject_noise(const LogicTree& tree, std::size_t noise_count, Rng& rng,
                                      const GeneratorLimits& limits = {});

using Lexicon = std::vector<std::string>;

std::unordered_set<std::string> load_word_list(const std::filesystem::path& path);

/// Random pronounceable letter strings of length 4..14 that are not in
/// `words` (lowercase).
Lexicon build_virtual_lexicon(std::size_t size, const std::unordered_set<std::string>& words, Rng& rng);
Lexicon build_virtual_lexicon(std::size_t size, const std::filesystem::path& word_list, Rng& rng);

void save_lexicon(const Lexicon& lexicon, const std::filesystem::path& path);
Lexicon load_lexicon(const std::filesystem::path& path);

std::span<const std::string_view> greek_letter_names();

/// Injective surface assignment for `terms`.
std::map<TermId, std::string> ground_entities(const TermSet& terms, EntityStyle style, const Lexicon& lexicon,
                                              Rng& rng);

struct PromptInstance {
    std::string id;
    LogicTree tree;
    std::vector<Proposition> noise;
    TermSet noise_terms;
    EntityStyle entity_style = EntityStyle::Greek;
    std::map<TermId, std::string> grounded;
    QuestionType question_type = QuestionType::Proof;
    Proposition presented_conclusion;
    std::optional<Verdict> gold_verdict;
    /// Leaves and noise in presentation order.
    std::vector<Proposition> conditions;
    std::uint64_t seed = 0;

    std::size_t level() const { return static_cast<std::size_t>(tree.level); }
    std::size_t noise_count() const { return noise.size(); }
    const std::string& surface(TermId t) const;
};

struct InstancePlan {
    std::string id;
    int level = 1;
    std::size_t noise_count = 0;
    EntityStyle style = EntityStyle::Greek;
    QuestionType question_type = QuestionType::Proof;
};

/// Tree, noise, grounding and shuffled conditions for one prompt. The
/// presented conclusion is the root; judgment posing happens at rendering.
PromptInstance generate_instance(const InstancePlan& plan, std::uint64_t seed, const Lexicon& lexicon,
                                 const GeneratorLimits& limits = {});

}  // namespace mused
