#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "mused/closure.hpp"
#include "mused/parsing.hpp"
#include "mused/prompting.hpp"
#include "mused/scoring.hpp"
#include "mused/treegen.hpp"

namespace {

using namespace mused;

PromptInstance instance_at(int level, std::size_t noise, std::uint64_t seed) {
    InstancePlan plan{"bench", level, noise, EntityStyle::Greek, QuestionType::Proof};
    return generate_instance(plan, seed, Lexicon{});
}

void BM_GenerateTree(benchmark::State& state) {
    const int level = static_cast<int>(state.range(0));
    Rng rng(7);
    for (auto _ : state) benchmark::DoNotOptimize(generate_tree(level, rng));
}
BENCHMARK(BM_GenerateTree)->DenseRange(1, 10, 3);

void BM_Closure(benchmark::State& state) {
    const auto inst = instance_at(static_cast<int>(state.range(0)), 7, 11);
    for (auto _ : state) benchmark::DoNotOptimize(closure(inst.conditions));
}
BENCHMARK(BM_Closure)->DenseRange(1, 10, 3);

void BM_ScoreGold(benchmark::State& state) {
    const auto inst = instance_at(static_cast<int>(state.range(0)), 3, 13);
    const auto ref = build_reference(inst);
    const std::string text = gold_natural_response(inst);
    std::vector<std::string> entities;
    for (const auto& [id, surface] : inst.grounded) entities.push_back(surface);
    for (auto _ : state) {
        const auto parsed = parse_natural(text, entities);
        benchmark::DoNotOptimize(score(parsed, ref, inst.question_type));
    }
}
BENCHMARK(BM_ScoreGold)->DenseRange(1, 10, 3);

}  // namespace

BENCHMARK_MAIN();
