#include "mused/harness.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>
#include <unordered_map>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "mused/jsonl.hpp"

#ifndef MUSED_DATA_DIR
#define MUSED_DATA_DIR ""
#endif
#ifndef MUSED_INSTALL_DATA_DIR
#define MUSED_INSTALL_DATA_DIR ""
#endif

namespace mused {

namespace fs = std::filesystem;
using nlohmann::json;

RunConfig RunConfig::eval_profile() {
    return RunConfig{};
}

RunConfig RunConfig::uniform_profile(std::size_t per_level) {
    RunConfig config;
    config.level_counts.assign(10, per_level);
    return config;
}

void RunConfig::validate(const GeneratorLimits& limits) const {
    if (min_level < 0) throw ConfigError("min level must be >= 0");
    if (min_level + static_cast<int>(level_counts.size()) - 1 > limits.max_level)
        throw ConfigError(fmt::format("levels {}..{} exceed the generator cap of {}", min_level,
                                      min_level + static_cast<int>(level_counts.size()) - 1, limits.max_level));
    if (max_noise > limits.max_noise)
        throw ConfigError(fmt::format("max noise {} exceeds the generator cap of {}", max_noise, limits.max_noise));
    for (double p : {noise_inclusion, greek_ratio, judgment_ratio})
        if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("probabilities must lie in [0, 1]");
}

std::size_t RunConfig::total() const {
    std::size_t n = 0;
    for (auto c : level_counts) n += c;
    return n;
}

fs::path default_word_list() {
    if (const char* env = std::getenv("MUSED_WORD_LIST")) return env;
    for (const fs::path& dir : {fs::path(MUSED_DATA_DIR), fs::path(MUSED_INSTALL_DATA_DIR)}) {
        if (dir.empty()) continue;
        const auto candidate = dir / "english_words.txt";
        if (fs::exists(candidate)) return candidate;
    }
    return {};
}

void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!error) error = std::current_exception();
                        next = n;
                    }
                }
            });
        }
    }
    if (error) std::rethrow_exception(error);
}

Lexicon prepare_lexicon(const RunConfig& config) {
    if (!config.lexicon.empty()) return load_lexicon(config.lexicon);
    if (config.greek_ratio >= 1.0) return {};
    const fs::path words = config.word_list.empty() ? default_word_list() : config.word_list;
    if (words.empty()) throw ConfigError("virtual entities need --lexicon or --word-list (no default word list found)");
    Rng rng(derive_seed(config.seed, 0xffffffffULL));
    return build_virtual_lexicon(config.lexicon_size, words, rng);
}

std::vector<PromptRecord> generate_records(const RunConfig& config, const Lexicon& lexicon) {
    config.validate();
    struct Slot {
        int level;
    };
    std::vector<Slot> slots;
    for (std::size_t i = 0; i < config.level_counts.size(); ++i)
        for (std::size_t k = 0; k < config.level_counts[i]; ++k) slots.push_back({config.min_level + static_cast<int>(i)});

    const int width = std::max<int>(6, static_cast<int>(std::to_string(slots.size()).size()));
    std::vector<PromptRecord> records(slots.size());
    parallel_for(slots.size(), config.threads, [&](std::size_t i) {
        Rng rng(derive_seed(config.seed, i));
        InstancePlan plan;
        plan.id = fmt::format("mused-{:0{}}", i, width);
        plan.level = slots[i].level;
        for (std::size_t s = 0; s < config.max_noise; ++s)
            if (rng.bernoulli(config.noise_inclusion)) ++plan.noise_count;
        plan.style = rng.bernoulli(config.greek_ratio) ? EntityStyle::Greek : EntityStyle::Virtual;
        plan.question_type = rng.bernoulli(config.judgment_ratio) ? QuestionType::Judgment : QuestionType::Proof;
        const std::uint64_t instance_seed = rng.next();

        PromptInstance instance = generate_instance(plan, instance_seed, lexicon);
        if (plan.question_type == QuestionType::Judgment) {
            Rng pose(derive_seed(instance_seed, 1));
            instance = pose_judgment(std::move(instance), pose);
        }
        PromptRecord record = render(instance);
        if (config.mode == ResponseMode::Formatted) record = attach_format_instructions(std::move(record));
        records[i] = std::move(record);
    });
    return records;
}

GenerateSummary cmd_generate(const RunConfig& config) {
    config.validate();
    fs::create_directories(config.out_dir);
    const Lexicon lexicon = prepare_lexicon(config);
    const auto records = generate_records(config, lexicon);

    GenerateSummary summary;
    summary.prompts = records.size();
    summary.prompts_file = config.out_dir / "prompts.jsonl";
    summary.gold_file = config.out_dir / "gold.jsonl";
    JsonlWriter prompts(summary.prompts_file);
    JsonlWriter gold(summary.gold_file);
    for (const auto& record : records) {
        prompts.write(prompt_to_json(record));
        gold.write(gold_to_json(record));
    }
    prompts.close();
    gold.close();
    if (!lexicon.empty()) save_lexicon(lexicon, config.out_dir / "lexicon.txt");
    return summary;
}

std::vector<GoldEntry> load_gold(const fs::path& path) {
    std::vector<GoldEntry> out;
    for (const auto& row : read_jsonl(path)) out.push_back(gold_from_json(row));
    return out;
}

std::vector<PromptRecord> load_prompts(const fs::path& path) {
    std::vector<PromptRecord> out;
    for (const auto& row : read_jsonl(path)) out.push_back(prompt_from_json(row));
    return out;
}

std::vector<ScoreRow> load_scores(const fs::path& path) {
    std::vector<ScoreRow> out;
    for (const auto& row : read_jsonl(path)) out.push_back(score_row_from_json(row));
    return out;
}

std::vector<ScoreRow> score_responses(std::span<const ResponseRecord> responses, std::span<const GoldEntry> gold,
                                      std::size_t threads, std::size_t* skipped) {
    std::unordered_map<std::string, const GoldEntry*> by_id;
    for (const auto& entry : gold) by_id.emplace(entry.instance.id, &entry);

    // Reference tables are built once per prompt and shared by its responses.
    std::vector<const GoldEntry*> needed;
    std::unordered_map<std::string, std::size_t> ref_index;
    std::vector<std::optional<std::size_t>> response_ref(responses.size());
    std::size_t missing = 0;
    for (std::size_t i = 0; i < responses.size(); ++i) {
        auto it = by_id.find(responses[i].prompt_id);
        if (it == by_id.end()) {
            spdlog::warn("response for unknown prompt {} skipped", responses[i].prompt_id);
            ++missing;
            continue;
        }
        auto [slot, inserted] = ref_index.emplace(it->first, needed.size());
        if (inserted) needed.push_back(it->second);
        response_ref[i] = slot->second;
    }
    std::vector<ReferenceTables> refs(needed.size());
    std::vector<std::vector<std::string>> entities(needed.size());
    parallel_for(needed.size(), threads, [&](std::size_t k) {
        refs[k] = build_reference(needed[k]->instance);
        for (const auto& [id, surface] : needed[k]->instance.grounded) entities[k].push_back(surface);
    });

    std::vector<std::optional<ScoreRow>> scored(responses.size());
    parallel_for(responses.size(), threads, [&](std::size_t i) {
        if (!response_ref[i]) return;
        const std::size_t k = *response_ref[i];
        const GoldEntry& entry = *needed[k];
        const ResponseRecord& response = responses[i];
        const ParsedResponse parsed = parse_response(entry.mode, response.raw_text, entities[k]);
        ScoreRow row;
        row.prompt_id = response.prompt_id;
        row.sample_index = response.sample_index;
        row.model_name = response.model_name;
        row.level = entry.instance.level();
        row.noise_count = entry.instance.noise_count();
        row.question_type = entry.instance.question_type;
        row.scores = score(parsed, refs[k], entry.instance.question_type);
        scored[i] = std::move(row);
    });

    std::vector<ScoreRow> out;
    for (auto& row : scored)
        if (row) out.push_back(std::move(*row));
    if (skipped) *skipped = missing;
    return out;
}

ScoreSummary cmd_score(const fs::path& responses_path, const fs::path& gold_path, const fs::path& out,
                       std::size_t threads) {
    const auto gold = load_gold(gold_path);
    const auto responses = load_responses(responses_path);
    ScoreSummary summary;
    const auto rows = score_responses(responses, gold, threads, &summary.skipped);
    summary.scored = rows.size();
    JsonlWriter writer(out);
    for (const auto& row : rows) writer.write(score_row_to_json(row));
    writer.close();
    return summary;
}

AggregateReport cmd_report(std::span<const fs::path> scores, const fs::path& out_dir) {
    std::vector<ScoreRow> rows;
    for (const auto& path : scores) {
        auto part = load_scores(path);
        rows.insert(rows.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    AggregateReport report = aggregate(rows);
    fs::create_directories(out_dir);
    {
        std::ofstream out(out_dir / "report.json", std::ios::binary);
        out << report_to_json(report).dump(2) << '\n';
        if (!out) throw IoError("cannot write " + (out_dir / "report.json").string());
    }
    {
        std::ofstream out(out_dir / "report.txt", std::ios::binary);
        out << render_report(report);
        if (!out) throw IoError("cannot write " + (out_dir / "report.txt").string());
    }
    return report;
}

std::size_t cmd_pairs(const fs::path& scores_path, const fs::path& responses_path, const fs::path& prompts_path,
                      PairMethod method, std::optional<std::size_t> cap, const fs::path& out) {
    const auto rows = load_scores(scores_path);
    const auto responses = load_responses(responses_path);
    const auto prompts = load_prompts(prompts_path);

    std::map<std::tuple<std::string, std::size_t, std::string>, const ResponseRecord*> texts;
    for (const auto& r : responses) texts[{r.prompt_id, r.sample_index, r.model_name}] = &r;
    std::unordered_map<std::string, std::string> prompt_text;
    for (const auto& p : prompts) prompt_text.emplace(p.id, p.text);

    std::vector<std::string> order;
    std::unordered_map<std::string, std::vector<ScoredResponse>> groups;
    for (const auto& row : rows) {
        auto it = texts.find({row.prompt_id, row.sample_index, row.model_name});
        if (it == texts.end()) throw ConfigError("score row without response: " + row.prompt_id);
        auto [g, inserted] = groups.try_emplace(row.prompt_id);
        if (inserted) order.push_back(row.prompt_id);
        g->second.push_back({{row.prompt_id, row.sample_index, row.model_name}, row.scores, it->second->raw_text});
    }

    std::vector<PreferencePair> pairs;
    for (const auto& id : order) {
        auto composed = compose(groups.at(id), method, cap);
        pairs.insert(pairs.end(), std::make_move_iterator(composed.begin()), std::make_move_iterator(composed.end()));
    }
    return export_pairs(
        pairs,
        [&](const std::string& id) {
            auto it = prompt_text.find(id);
            if (it == prompt_text.end()) throw ConfigError("pair for unknown prompt " + id);
            return it->second;
        },
        out);
}

std::size_t cmd_sample(const fs::path& prompts_path, const SamplerConfig& config, const fs::path& out) {
    const auto prompts = load_prompts(prompts_path);
    const auto records = sample(prompts, config);
    save_responses(records, out);
    return records.size();
}

}  // namespace mused
