#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mused/scoring.hpp"
#include "mused/types.hpp"

namespace mused {

/// One scored response, as written by `mused score`.
struct ScoreRow {
    std::string prompt_id;
    std::size_t sample_index = 0;
    std::string model_name;
    std::size_t level = 0;
    std::size_t noise_count = 0;
    QuestionType question_type = QuestionType::Proof;
    ScoreVector scores;
};

nlohmann::json score_row_to_json(const ScoreRow& row);
ScoreRow score_row_from_json(const nlohmann::json& j);

struct ModelSummary {
    std::string model;
    std::size_t responses = 0;
    double step_score = 0, result_score = 0, intent_score = 0;
    double wrong_steps = 0, noise_steps = 0, extra_steps = 0;
};

struct BucketCell {
    double mean_step_score = 0;
    std::size_t responses = 0;
};

struct BucketRow {
    std::size_t key = 0;
    /// Distinct prompts in the bucket.
    std::size_t prompts = 0;
    /// One entry per model, in AggregateReport::models order.
    std::vector<std::optional<BucketCell>> cells;
};

struct AggregateReport {
    std::vector<std::string> models;  // first-appearance order
    std::vector<ModelSummary> overall;
    std::vector<BucketRow> by_level;
    std::vector<BucketRow> by_noise;
    std::size_t prompts = 0;
};

AggregateReport aggregate(std::span<const ScoreRow> rows);

nlohmann::json report_to_json(const AggregateReport& report);

/// Plain-text tables: overall means, then step score by level and by noise
/// count (rows = bucket, columns = models).
std::string render_report(const AggregateReport& report);

}  // namespace mused
