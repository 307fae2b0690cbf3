#include "mused/scoring.hpp"

#include <algorithm>
#include <cctype>

namespace mused {

namespace {

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::ranges::transform(out, out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::size_t gain(const TermSet& candidate, const TermSet& middles, const TermSet& eliminated) {
    std::size_t n = 0;
    for (TermId t : candidate)
        if (std::ranges::binary_search(middles, t) && !std::ranges::binary_search(eliminated, t)) ++n;
    return n;
}

}  // namespace

ReferenceTables build_reference(const PromptInstance& instance) {
    ReferenceTables ref;
    ref.relation = closure(instance.tree.leaves);
    std::vector<Proposition> all = instance.tree.leaves;
    all.insert(all.end(), instance.noise.begin(), instance.noise.end());
    ref.noise_relation = closure(all);
    ref.all_middles = instance.tree.middle_terms();
    ref.root = instance.tree.root;
    ref.gold_verdict = instance.gold_verdict;
    for (const auto& [id, surface] : instance.grounded) ref.by_surface.emplace(lowercase(surface), id);
    return ref;
}

ScoreDetail score_detailed(const ParsedResponse& parsed, const ReferenceTables& ref, QuestionType question_type) {
    ScoreDetail detail;
    ScoreVector& s = detail.scores;
    bool root_credited = false;

    for (const auto& step : parsed.steps) {
        const auto subject = ref.by_surface.find(lowercase(step.subject));
        const auto predicate = ref.by_surface.find(lowercase(step.predicate));
        if (subject == ref.by_surface.end() || predicate == ref.by_surface.end() ||
            subject->second == predicate->second) {
            detail.classes.push_back(StepClass::Noise);
            ++s.noise_steps;
            continue;
        }
        const Proposition prop{subject->second, predicate->second, step.form};
        const std::vector<TermSet> sets = ref.relation.find(prop);
        if (!sets.empty()) {
            const bool is_root = equivalent(prop, ref.root);
            detail.proved_conclusion_seen |= is_root;
            bool fresh = false;
            if (ref.all_middles.empty()) {
                // Nothing to eliminate: the first restatement of the root is the whole task.
                fresh = is_root && !root_credited;
                root_credited |= fresh;
            } else {
                // find() returns sets in lexicographic order, so the first maximum wins ties.
                const TermSet* best = &sets.front();
                std::size_t best_gain = gain(*best, ref.all_middles, detail.eliminated);
                for (const auto& set : sets) {
                    const std::size_t g = gain(set, ref.all_middles, detail.eliminated);
                    if (g > best_gain) {
                        best = &set;
                        best_gain = g;
                    }
                }
                if (best_gain > 0) {
                    fresh = true;
                    std::vector<TermId> merged = detail.eliminated;
                    for (TermId t : *best)
                        if (std::ranges::binary_search(ref.all_middles, t)) merged.push_back(t);
                    detail.eliminated = make_term_set(std::move(merged));
                }
            }
            detail.classes.push_back(fresh ? StepClass::CorrectNew : StepClass::Extra);
            if (!fresh) ++s.extra_steps;
            continue;
        }
        if (ref.noise_relation.contains(negate(prop))) {
            detail.classes.push_back(StepClass::Wrong);
            ++s.wrong_steps;
        } else {
            detail.classes.push_back(StepClass::Noise);
            ++s.noise_steps;
        }
    }

    if (ref.all_middles.empty()) {
        s.step_score = root_credited ? 1.0 : 0.0;
    } else {
        s.step_score = static_cast<double>(detail.eliminated.size()) / static_cast<double>(ref.all_middles.size());
    }
    if (question_type == QuestionType::Proof) {
        s.result_score = detail.proved_conclusion_seen ? 1 : 0;
    } else {
        s.result_score = parsed.verdict && ref.gold_verdict && *parsed.verdict == *ref.gold_verdict ? 1 : 0;
    }
    s.intent_score = parsed.intent_ok ? 1 : 0;
    return detail;
}

ScoreVector score(const ParsedResponse& parsed, const ReferenceTables& ref, QuestionType question_type) {
    return score_detailed(parsed, ref, question_type).scores;
}

nlohmann::json scores_to_json(const ScoreVector& s) {
    return {{"step_score", s.step_score},   {"result_score", s.result_score}, {"intent_score", s.intent_score},
            {"wrong_steps", s.wrong_steps}, {"noise_steps", s.noise_steps},   {"extra_steps", s.extra_steps}};
}

ScoreVector scores_from_json(const nlohmann::json& j) {
    ScoreVector s;
    s.step_score = j.at("step_score").get<double>();
    s.result_score = j.at("result_score").get<int>();
    s.intent_score = j.at("intent_score").get<int>();
    s.wrong_steps = j.at("wrong_steps").get<int>();
    s.noise_steps = j.at("noise_steps").get<int>();
    s.extra_steps = j.at("extra_steps").get<int>();
    return s;
}

}  // namespace mused
