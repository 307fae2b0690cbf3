#include "mused/pairing.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <tuple>

#include "mused/jsonl.hpp"
#include "mused/types.hpp"

namespace mused {

using nlohmann::json;

std::string_view to_string(PairMethod m) {
    switch (m) {
        case PairMethod::P: return "P";
        case PairMethod::PN: return "PN";
        case PairMethod::R: return "R";
    }
    return "?";
}

std::optional<PairMethod> parse_pair_method(std::string_view s) {
    if (s == "P") return PairMethod::P;
    if (s == "PN") return PairMethod::PN;
    if (s == "R") return PairMethod::R;
    return std::nullopt;
}

namespace {

std::array<double, 6> signed_vector(const ScoreVector& s) {
    return {s.step_score,
            static_cast<double>(s.result_score),
            static_cast<double>(s.intent_score),
            -static_cast<double>(s.wrong_steps),
            -static_cast<double>(s.noise_steps),
            -static_cast<double>(s.extra_steps)};
}

}  // namespace

bool prefers(PairMethod method, const ScoreVector& c, const ScoreVector& r) {
    switch (method) {
        case PairMethod::P:
            return c.step_score > r.step_score && c.result_score >= r.result_score;
        case PairMethod::PN: {
            const auto cv = signed_vector(c);
            const auto rv = signed_vector(r);
            bool strictly = false;
            for (std::size_t i = 0; i < cv.size(); ++i) {
                if (cv[i] < rv[i]) return false;
                strictly |= cv[i] > rv[i];
            }
            return strictly;
        }
        case PairMethod::R:
            return c.result_score == 1 && r.result_score == 0;
    }
    return false;
}

double pair_gap(PairMethod method, const ScoreVector& c, const ScoreVector& r) {
    const double result_gap = c.result_score - r.result_score;
    const double step_gap = c.step_score - r.step_score;
    if (method != PairMethod::PN) return step_gap + result_gap;
    const auto cv = signed_vector(c);
    const auto rv = signed_vector(r);
    double gap = 0;
    for (std::size_t i = 0; i < cv.size(); ++i) gap += cv[i] - rv[i];
    return gap;
}

std::vector<PreferencePair> compose(std::span<const ScoredResponse> group, PairMethod method,
                                    std::optional<std::size_t> cap) {
    struct Candidate {
        double gap;
        std::size_t chosen;
        std::size_t rejected;
    };
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < group.size(); ++i)
        for (std::size_t j = 0; j < group.size(); ++j)
            if (i != j && prefers(method, group[i].scores, group[j].scores))
                candidates.push_back({pair_gap(method, group[i].scores, group[j].scores), i, j});

    std::ranges::stable_sort(candidates, [](const Candidate& a, const Candidate& b) { return a.gap > b.gap; });

    // Identical response texts (common at low temperature) would repeat a pair.
    std::set<std::pair<std::string_view, std::string_view>> seen;
    std::vector<PreferencePair> pairs;
    for (const auto& c : candidates) {
        if (cap && pairs.size() >= *cap) break;
        if (!seen.emplace(group[c.chosen].text, group[c.rejected].text).second) continue;
        pairs.push_back({group[c.chosen].ref.prompt_id, group[c.chosen], group[c.rejected], method});
    }
    return pairs;
}

namespace {

json response_to_json(const ScoredResponse& r) {
    return {{"model_name", r.ref.model_name},
            {"sample_index", r.ref.sample_index},
            {"text", r.text},
            {"scores", scores_to_json(r.scores)}};
}

ScoredResponse response_from_json(const json& j, const std::string& prompt_id) {
    ScoredResponse r;
    r.ref = {prompt_id, j.at("sample_index").get<std::size_t>(), j.at("model_name").get<std::string>()};
    r.text = j.at("text").get<std::string>();
    r.scores = scores_from_json(j.at("scores"));
    return r;
}

}  // namespace

std::size_t export_pairs(std::span<const PreferencePair> pairs,
                         const std::function<std::string(const std::string&)>& prompt_text,
                         const std::filesystem::path& path) {
    JsonlWriter writer(path);
    std::set<std::tuple<std::string, std::string, std::string>> seen;
    std::size_t written = 0;
    for (const auto& pair : pairs) {
        std::string prompt = prompt_text(pair.prompt_id);
        if (!seen.emplace(prompt, pair.chosen.text, pair.rejected.text).second) continue;
        writer.write({{"prompt_id", pair.prompt_id},
                      {"method", std::string(to_string(pair.method))},
                      {"prompt", std::move(prompt)},
                      {"chosen", response_to_json(pair.chosen)},
                      {"rejected", response_to_json(pair.rejected)}});
        ++written;
    }
    writer.close();
    return written;
}

std::vector<ExportedPair> load_pairs(const std::filesystem::path& path) {
    std::vector<ExportedPair> out;
    for (const auto& row : read_jsonl(path)) {
        try {
            ExportedPair e;
            e.pair.prompt_id = row.at("prompt_id").get<std::string>();
            const auto method = parse_pair_method(row.at("method").get<std::string>());
            if (!method) throw ConfigError("unknown pair method in " + path.string());
            e.pair.method = *method;
            e.prompt = row.at("prompt").get<std::string>();
            e.pair.chosen = response_from_json(row.at("chosen"), e.pair.prompt_id);
            e.pair.rejected = response_from_json(row.at("rejected"), e.pair.prompt_id);
            out.push_back(std::move(e));
        } catch (const json::exception& ex) {
            throw ConfigError("malformed pair row in " + path.string() + ": " + ex.what());
        }
    }
    return out;
}

}  // namespace mused
