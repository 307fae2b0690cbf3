#include "mused/report.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <fmt/format.h>

namespace mused {

using nlohmann::json;

json score_row_to_json(const ScoreRow& row) {
    return {{"prompt_id", row.prompt_id},
            {"sample_index", row.sample_index},
            {"model_name", row.model_name},
            {"level", row.level},
            {"noise_count", row.noise_count},
            {"question_type", std::string(to_string(row.question_type))},
            {"scores", scores_to_json(row.scores)}};
}

ScoreRow score_row_from_json(const json& j) {
    try {
        ScoreRow row;
        row.prompt_id = j.at("prompt_id").get<std::string>();
        row.sample_index = j.at("sample_index").get<std::size_t>();
        row.model_name = j.at("model_name").get<std::string>();
        row.level = j.at("level").get<std::size_t>();
        row.noise_count = j.at("noise_count").get<std::size_t>();
        const auto qt = parse_question_type(j.at("question_type").get<std::string>());
        if (!qt) throw ConfigError("bad question_type in score row " + row.prompt_id);
        row.question_type = *qt;
        row.scores = scores_from_json(j.at("scores"));
        return row;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed score row: ") + e.what());
    }
}

namespace {

std::vector<BucketRow> bucketize(std::span<const ScoreRow> rows, const std::vector<std::string>& models,
                                 std::size_t ScoreRow::*key) {
    struct Acc {
        std::set<std::string> prompts;
        std::vector<double> sums;
        std::vector<std::size_t> counts;
    };
    std::map<std::size_t, Acc> buckets;
    for (const auto& row : rows) {
        auto& acc = buckets[row.*key];
        if (acc.sums.empty()) {
            acc.sums.assign(models.size(), 0.0);
            acc.counts.assign(models.size(), 0);
        }
        const auto m = static_cast<std::size_t>(std::ranges::find(models, row.model_name) - models.begin());
        acc.prompts.insert(row.prompt_id);
        acc.sums[m] += row.scores.step_score;
        ++acc.counts[m];
    }
    std::vector<BucketRow> out;
    for (const auto& [k, acc] : buckets) {
        BucketRow bucket{k, acc.prompts.size(), {}};
        for (std::size_t m = 0; m < models.size(); ++m) {
            if (acc.counts[m] == 0) bucket.cells.emplace_back();
            else bucket.cells.push_back(BucketCell{acc.sums[m] / static_cast<double>(acc.counts[m]), acc.counts[m]});
        }
        out.push_back(std::move(bucket));
    }
    return out;
}

}  // namespace

AggregateReport aggregate(std::span<const ScoreRow> rows) {
    AggregateReport report;
    std::set<std::string> prompts;
    for (const auto& row : rows) {
        prompts.insert(row.prompt_id);
        if (std::ranges::find(report.models, row.model_name) == report.models.end())
            report.models.push_back(row.model_name);
    }
    report.prompts = prompts.size();

    for (const auto& model : report.models) {
        ModelSummary s{model};
        for (const auto& row : rows) {
            if (row.model_name != model) continue;
            ++s.responses;
            s.step_score += row.scores.step_score;
            s.result_score += row.scores.result_score;
            s.intent_score += row.scores.intent_score;
            s.wrong_steps += row.scores.wrong_steps;
            s.noise_steps += row.scores.noise_steps;
            s.extra_steps += row.scores.extra_steps;
        }
        const double n = static_cast<double>(s.responses);
        for (double* v : {&s.step_score, &s.result_score, &s.intent_score, &s.wrong_steps, &s.noise_steps,
                          &s.extra_steps})
            *v /= n;
        report.overall.push_back(s);
    }
    report.by_level = bucketize(rows, report.models, &ScoreRow::level);
    report.by_noise = bucketize(rows, report.models, &ScoreRow::noise_count);
    return report;
}

json report_to_json(const AggregateReport& report) {
    json overall = json::array();
    for (const auto& s : report.overall) {
        overall.push_back({{"model", s.model},
                           {"responses", s.responses},
                           {"step_score", s.step_score},
                           {"result_score", s.result_score},
                           {"intent_score", s.intent_score},
                           {"wrong_steps", s.wrong_steps},
                           {"noise_steps", s.noise_steps},
                           {"extra_steps", s.extra_steps}});
    }
    auto buckets = [&](const std::vector<BucketRow>& rows, const char* key) {
        json out = json::array();
        for (const auto& row : rows) {
            json cells = json::object();
            for (std::size_t m = 0; m < report.models.size(); ++m) {
                if (!row.cells[m]) continue;
                cells[report.models[m]] = {{"step_score", row.cells[m]->mean_step_score},
                                           {"responses", row.cells[m]->responses}};
            }
            out.push_back({{key, row.key}, {"count", row.prompts}, {"models", std::move(cells)}});
        }
        return out;
    };
    return {{"prompts", report.prompts},
            {"models", report.models},
            {"overall", std::move(overall)},
            {"by_level", buckets(report.by_level, "level")},
            {"by_noise", buckets(report.by_noise, "noise_count")}};
}

namespace {

std::string bucket_table(const AggregateReport& report, const std::vector<BucketRow>& rows, std::string_view label) {
    std::size_t width = 10;
    for (const auto& m : report.models) width = std::max(width, m.size() + 2);
    std::string out = fmt::format("{:<8}{:>8}", label, "count");
    for (const auto& m : report.models) out += fmt::format("{:>{}}", m, width);
    out += '\n';
    for (const auto& row : rows) {
        out += fmt::format("{:<8}{:>8}", row.key, row.prompts);
        for (const auto& cell : row.cells)
            out += cell ? fmt::format("{:>{}.4f}", cell->mean_step_score, width) : fmt::format("{:>{}}", "-", width);
        out += '\n';
    }
    return out;
}

}  // namespace

std::string render_report(const AggregateReport& report) {
    std::string out = fmt::format("prompts: {}\n\n", report.prompts);
    out += fmt::format("{:<28}{:>10}{:>8}{:>8}{:>8}{:>8}{:>8}{:>8}\n", "model", "responses", "step", "result", "intent",
                       "wrong", "noise", "extra");
    for (const auto& s : report.overall) {
        out += fmt::format("{:<28}{:>10}{:>8.4f}{:>8.4f}{:>8.4f}{:>8.4f}{:>8.4f}{:>8.4f}\n", s.model, s.responses,
                           s.step_score, s.result_score, s.intent_score, s.wrong_steps, s.noise_steps, s.extra_steps);
    }
    out += "\nstep score by level\n" + bucket_table(report, report.by_level, "level");
    out += "\nstep score by noise count\n" + bucket_table(report, report.by_noise, "noise");
    return out;
}

}  // namespace mused
