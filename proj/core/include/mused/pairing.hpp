#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mused/scoring.hpp"

namespace mused {

enum class PairMethod { P, PN, R };

std::string_view to_string(PairMethod m);
std::optional<PairMethod> parse_pair_method(std::string_view s);

struct ResponseRef {
    std::string prompt_id;
    std::size_t sample_index = 0;
    std::string model_name;
    friend bool operator==(const ResponseRef&, const ResponseRef&) = default;
};

struct ScoredResponse {
    ResponseRef ref;
    ScoreVector scores;
    std::string text;
};

struct PreferencePair {
    std::string prompt_id;
    ScoredResponse chosen;
    ScoredResponse rejected;
    PairMethod method = PairMethod::P;
};

/// P:  step strictly higher, result not lower.
/// PN: Pareto dominance over (step, result, intent, -wrong, -noise, -extra).
/// R:  chosen has result 1, rejected result 0.
bool prefers(PairMethod method, const ScoreVector& chosen, const ScoreVector& rejected);

/// Score gap used to rank candidate pairs when capping.
double pair_gap(PairMethod method, const ScoreVector& chosen, const ScoreVector& rejected);

/// Every ordered pair of the group satisfying the method, largest gaps first,
/// truncated to `cap` pairs when given. Pairs repeating an earlier
/// (chosen text, rejected text) combination are skipped.
std::vector<PreferencePair> compose(std::span<const ScoredResponse> group, PairMethod method,
                                    std::optional<std::size_t> cap = 4);

/// One JSON row per pair with the prompt text and both responses inlined.
/// Rows repeating an earlier (prompt, chosen text, rejected text) are dropped.
/// Returns the number of rows written.
std::size_t export_pairs(std::span<const PreferencePair> pairs,
                         const std::function<std::string(const std::string&)>& prompt_text,
                         const std::filesystem::path& path);

struct ExportedPair {
    PreferencePair pair;
    std::string prompt;
};
std::vector<ExportedPair> load_pairs(const std::filesystem::path& path);

}  // namespace mused
