// mused: generate multi-step syllogism prompts, sample model responses,
// score them, compose preference pairs and report per-level results.
//
//   mused generate --out run/ [--profile eval|uniform] [--seed N] ...
//   mused sample   --prompts run/prompts.jsonl --model NAME --out run/responses.jsonl
//   mused score    --responses run/responses.jsonl --gold run/gold.jsonl --out run/scores.jsonl
//   mused pairs    --scores ... --responses ... --prompts ... --method P|PN|R --out pairs.jsonl
//   mused report   --scores run/scores.jsonl [--scores more.jsonl] --out run/
//   mused lexicon  --size N --word-list words.txt --out lexicon.txt

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "mused/harness.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
    CLI::App app{"Multi-step syllogistic deduction data generation and scoring"};
    app.require_subcommand(1);
    spdlog::set_pattern("[%l] %v");
    spdlog::set_default_logger(spdlog::stderr_color_st("mused"));

    // generate
    auto* gen = app.add_subcommand("generate", "Generate prompts and gold references");
    mused::RunConfig run;
    std::string profile = "eval";
    std::size_t per_level = 200;
    std::vector<std::size_t> counts;
    std::string mode = "natural";
    gen->add_option("--out", run.out_dir, "Output directory")->required();
    gen->add_option("--profile", profile, "Level-count profile")->check(CLI::IsMember({"eval", "uniform"}));
    gen->add_option("--per-level", per_level, "Prompts per level for the uniform profile");
    gen->add_option("--level-counts", counts, "Explicit per-level counts (overrides profile)");
    gen->add_option("--min-level", run.min_level, "Level of the first count");
    gen->add_option("--seed", run.seed, "Master seed");
    gen->add_option("--noise-inclusion", run.noise_inclusion, "Per-slot noise probability");
    gen->add_option("--max-noise", run.max_noise, "Noise slots per prompt");
    gen->add_option("--greek-ratio", run.greek_ratio, "Share of prompts with Greek-letter entities");
    gen->add_option("--judgment-ratio", run.judgment_ratio, "Share of judgment questions");
    gen->add_option("--mode", mode, "Response mode")->check(CLI::IsMember({"natural", "formatted"}));
    gen->add_option("--lexicon", run.lexicon, "Existing virtual-noun lexicon")->check(CLI::ExistingFile);
    gen->add_option("--word-list", run.word_list, "English word list for building a lexicon")
        ->check(CLI::ExistingFile);
    gen->add_option("--lexicon-size", run.lexicon_size, "Virtual nouns to build");
    gen->add_option("--threads", run.threads, "Worker threads (0 = all cores)");

    // sample
    auto* smp = app.add_subcommand("sample", "Query a chat-completions endpoint");
    mused::SamplerConfig sampler;
    fs::path sample_prompts, sample_out;
    std::string purpose = "eval";
    std::optional<double> temperature;
    std::optional<std::size_t> samples;
    int backoff_ms = 1000;
    int timeout_s = 120;
    smp->add_option("--prompts", sample_prompts, "Prompt file")->required()->check(CLI::ExistingFile);
    smp->add_option("--out", sample_out, "Response file")->required();
    smp->add_option("--endpoint", sampler.endpoint, "Chat-completions URL");
    smp->add_option("--model", sampler.model, "Model name")->required();
    smp->add_option("--purpose", purpose, "eval (T=0.3, 1 sample) or train (T=1.0, 4 samples)")
        ->check(CLI::IsMember({"eval", "train"}));
    smp->add_option("--temperature", temperature, "Sampling temperature");
    smp->add_option("--samples", samples, "Samples per prompt");
    smp->add_option("--parallelism", sampler.parallelism, "Requests in flight");
    smp->add_option("--max-tokens", sampler.max_tokens, "Completion token limit");
    smp->add_option("--retries", sampler.max_attempts, "Attempts per request");
    smp->add_option("--backoff-ms", backoff_ms, "Initial retry backoff");
    smp->add_option("--timeout", timeout_s, "Per-request timeout in seconds");
    smp->add_option("--api-key-env", sampler.api_key_env, "Environment variable with the API key");

    // score
    auto* sc = app.add_subcommand("score", "Score responses against gold references");
    fs::path score_responses, score_gold, score_out;
    std::size_t score_threads = 0;
    sc->add_option("--responses", score_responses, "Response file")->required()->check(CLI::ExistingFile);
    sc->add_option("--gold", score_gold, "Gold file")->required()->check(CLI::ExistingFile);
    sc->add_option("--out", score_out, "Score file")->required();
    sc->add_option("--threads", score_threads, "Worker threads (0 = all cores)");

    // pairs
    auto* pr = app.add_subcommand("pairs", "Compose preference pairs");
    fs::path pair_scores, pair_responses, pair_prompts, pair_out;
    std::string method = "P";
    std::size_t cap = 4;
    pr->add_option("--scores", pair_scores, "Score file")->required()->check(CLI::ExistingFile);
    pr->add_option("--responses", pair_responses, "Response file")->required()->check(CLI::ExistingFile);
    pr->add_option("--prompts", pair_prompts, "Prompt file")->required()->check(CLI::ExistingFile);
    pr->add_option("--method", method, "P, PN or R")
        ->required()
        ->check(CLI::IsMember({"P", "PN", "R"}));
    pr->add_option("--cap", cap, "Max pairs per prompt (0 = unlimited)");
    pr->add_option("--out", pair_out, "Pair file")->required();

    // report
    auto* rp = app.add_subcommand("report", "Aggregate scores per model, level and noise count");
    std::vector<fs::path> report_scores;
    fs::path report_out;
    rp->add_option("--scores", report_scores, "Score files (repeatable)")->required()->check(CLI::ExistingFile);
    rp->add_option("--out", report_out, "Output directory")->required();

    // lexicon
    auto* lx = app.add_subcommand("lexicon", "Build a virtual-noun lexicon");
    std::size_t lexicon_size = 2000;
    fs::path lexicon_words, lexicon_out;
    std::uint64_t lexicon_seed = 1;
    lx->add_option("--size", lexicon_size, "Number of nouns");
    lx->add_option("--word-list", lexicon_words, "English word list")->check(CLI::ExistingFile);
    lx->add_option("--seed", lexicon_seed, "Seed");
    lx->add_option("--out", lexicon_out, "Lexicon file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            if (!counts.empty()) run.level_counts = counts;
            else if (profile == "uniform") run.level_counts.assign(10, per_level);
            run.mode = *mused::parse_response_mode(mode);
            const auto summary = mused::cmd_generate(run);
            std::cerr << "wrote " << summary.prompts << " prompts to " << summary.prompts_file.string() << "\n";
        } else if (*smp) {
            sampler.temperature = temperature.value_or(purpose == "train" ? 1.0 : 0.3);
            sampler.samples_per_prompt = samples.value_or(purpose == "train" ? 4 : 1);
            sampler.initial_backoff = std::chrono::milliseconds(backoff_ms);
            sampler.timeout = std::chrono::seconds(timeout_s);
            const auto n = mused::cmd_sample(sample_prompts, sampler, sample_out);
            std::cerr << "wrote " << n << " responses to " << sample_out.string() << "\n";
        } else if (*sc) {
            const auto summary = mused::cmd_score(score_responses, score_gold, score_out, score_threads);
            std::cerr << "scored " << summary.scored << " responses, skipped " << summary.skipped
                      << " with unknown prompt ids\n";
        } else if (*pr) {
            const std::optional<std::size_t> limit = cap == 0 ? std::nullopt : std::optional(cap);
            const auto n = mused::cmd_pairs(pair_scores, pair_responses, pair_prompts, *mused::parse_pair_method(method), limit, pair_out);
            std::cerr << "wrote " << n << " pairs to " << pair_out.string() << "\n";
        } else if (*rp) {
            const auto report = mused::cmd_report(report_scores, report_out);
            std::cout << mused::render_report(report);
        } else if (*lx) {
            const fs::path words = lexicon_words.empty() ? mused::default_word_list() : lexicon_words;
            if (words.empty()) throw mused::ConfigError("no word list given and none installed");
            mused::Rng rng(lexicon_seed);
            mused::save_lexicon(mused::build_virtual_lexicon(lexicon_size, words, rng), lexicon_out);
            std::cerr << "wrote " << lexicon_size << " nouns to " << lexicon_out.string() << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "mused: " << e.what() << "\n";
        return EXIT_FAILURE;
    }
    return EXIT_SUCCESS;
}
