#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mused/gateway.hpp"
#include "mused/pairing.hpp"
#include "mused/prompting.hpp"
#include "mused/report.hpp"

namespace mused {

/// Per-level prompt counts of the 2000-prompt evaluation set (levels 1..10).
inline constexpr std::array<std::size_t, 10> kEvalLevelCounts{194, 204, 204, 216, 164, 212, 184, 206, 212, 204};

struct RunConfig {
    std::uint64_t seed = 20240901;
    int min_level = 1;
    /// counts[i] prompts at level min_level + i.
    std::vector<std::size_t> level_counts{kEvalLevelCounts.begin(), kEvalLevelCounts.end()};
    /// Each of max_noise slots is filled independently with this probability.
    double noise_inclusion = 0.31;
    std::size_t max_noise = 7;
    double greek_ratio = 0.5;
    double judgment_ratio = 0.5;
    ResponseMode mode = ResponseMode::Natural;
    std::filesystem::path lexicon;    // existing lexicon file, optional
    std::filesystem::path word_list;  // used to build one when `lexicon` is empty
    std::size_t lexicon_size = 2000;
    std::filesystem::path out_dir = "out";
    std::size_t threads = 0;  // 0: hardware concurrency

    static RunConfig eval_profile();
    static RunConfig uniform_profile(std::size_t per_level = 200);

    /// Throws ConfigError on out-of-range values.
    void validate(const GeneratorLimits& limits = {}) const;
    std::size_t total() const;
};

/// Word list shipped with the sources, if present.
std::filesystem::path default_word_list();

/// Calls fn(i) for i in [0, n) on up to `threads` workers; rethrows the first
/// exception after all workers stop.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

/// Lexicon for the run: loaded from config.lexicon or built from the word list.
Lexicon prepare_lexicon(const RunConfig& config);

/// All prompt records for the run, in id order.
std::vector<PromptRecord> generate_records(const RunConfig& config, const Lexicon& lexicon);

struct GenerateSummary {
    std::size_t prompts = 0;
    std::filesystem::path prompts_file;
    std::filesystem::path gold_file;
};

/// Writes prompts.jsonl, gold.jsonl and lexicon.txt into config.out_dir.
GenerateSummary cmd_generate(const RunConfig& config);

struct ScoreSummary {
    std::size_t scored = 0;
    std::size_t skipped = 0;
};

/// Score rows for responses whose prompt is in `gold`, in input order.
std::vector<ScoreRow> score_responses(std::span<const ResponseRecord> responses, std::span<const GoldEntry> gold,
                                      std::size_t threads, std::size_t* skipped = nullptr);

ScoreSummary cmd_score(const std::filesystem::path& responses, const std::filesystem::path& gold,
                       const std::filesystem::path& out, std::size_t threads = 0);

std::vector<GoldEntry> load_gold(const std::filesystem::path& path);
std::vector<PromptRecord> load_prompts(const std::filesystem::path& path);
std::vector<ScoreRow> load_scores(const std::filesystem::path& path);

/// Aggregates the score files; writes report.json and report.txt into out_dir.
AggregateReport cmd_report(std::span<const std::filesystem::path> scores, const std::filesystem::path& out_dir);

/// Groups responses by prompt, composes pairs and exports them. Returns the
/// number of rows written.
std::size_t cmd_pairs(const std::filesystem::path& scores, const std::filesystem::path& responses,
                      const std::filesystem::path& prompts, PairMethod method, std::optional<std::size_t> cap,
                      const std::filesystem::path& out);

std::size_t cmd_sample(const std::filesystem::path& prompts, const SamplerConfig& config,
                       const std::filesystem::path& out);

}  // namespace mused
