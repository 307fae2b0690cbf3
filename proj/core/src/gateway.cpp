#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "mused/gateway.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <ctime>
#include <mutex>
#include <thread>

#include <spdlog/spdlog.h>

#include "mused/jsonl.hpp"

namespace mused {

using nlohmann::json;

json chat_request_body(const ChatRequest& request) {
    return {{"model", request.model},
            {"messages", json::array({{{"role", "user"}, {"content", request.prompt}}})},
            {"temperature", request.temperature},
            {"max_tokens", request.max_tokens}};
}

std::optional<std::string> extract_completion(std::string_view body) {
    const json doc = json::parse(body, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) return std::nullopt;
    const auto choices = doc.find("choices");
    if (choices == doc.end() || !choices->is_array() || choices->empty()) return std::nullopt;
    const json& first = choices->front();
    if (!first.is_object()) return std::nullopt;
    const auto message = first.find("message");
    if (message == first.end() || !message->is_object()) return std::nullopt;
    const auto content = message->find("content");
    if (content == message->end() || !content->is_string()) return std::nullopt;
    return content->get<std::string>();
}

namespace {

struct Endpoint {
    std::string base;  // scheme://host[:port]
    std::string path;
};

Endpoint split_endpoint(const std::string& url) {
    const auto scheme = url.find("://");
    if (scheme == std::string::npos) throw ConfigError("endpoint must start with http:// or https://: " + url);
    const auto slash = url.find('/', scheme + 3);
    if (slash == std::string::npos) return {url, "/v1/chat/completions"};
    return {url.substr(0, slash), url.substr(slash)};
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

bool retryable(int status) {
    return status == 0 || status == 408 || status == 429 || status >= 500;
}

}  // namespace

ChatTransport http_transport(const SamplerConfig& config, std::string api_key) {
    const Endpoint endpoint = split_endpoint(config.endpoint);
    const auto timeout = config.timeout;
    return [endpoint, timeout, key = std::move(api_key)](const ChatRequest& request) -> HttpReply {
        httplib::Client client(endpoint.base);
        client.set_connection_timeout(timeout);
        client.set_read_timeout(timeout);
        client.set_write_timeout(timeout);
        httplib::Headers headers;
        if (!key.empty()) headers.emplace("Authorization", "Bearer " + key);
        auto result = client.Post(endpoint.path, headers, chat_request_body(request).dump(), "application/json");
        if (!result) return {0, httplib::to_string(result.error())};
        return {result->status, result->body};
    };
}

std::string api_key_from_env(const SamplerConfig& config) {
    const char* value = std::getenv(config.api_key_env.c_str());
    if (!value) throw ConfigError("environment variable " + config.api_key_env + " is not set");
    return value;
}

std::vector<ResponseRecord> sample(std::span<const PromptRecord> prompts, const SamplerConfig& config,
                                   const ChatTransport& transport) {
    struct Job {
        const PromptRecord* prompt;
        std::size_t sample_index;
    };
    std::vector<Job> jobs;
    for (const auto& prompt : prompts)
        for (std::size_t s = 0; s < config.samples_per_prompt; ++s) jobs.push_back({&prompt, s});

    std::vector<ResponseRecord> records(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            const Job& job = jobs[i];
            const ChatRequest request{config.model, job.prompt->text, config.temperature, config.max_tokens};
            ResponseRecord& record = records[i];
            record.prompt_id = job.prompt->id;
            record.sample_index = job.sample_index;
            record.model_name = config.model;
            record.temperature = config.temperature;
            record.transport_status = TransportStatus::Failed;
            auto delay = config.initial_backoff;
            for (int attempt = 1; attempt <= config.max_attempts; ++attempt) {
                const HttpReply reply = transport(request);
                if (reply.status == 200) {
                    if (auto content = extract_completion(reply.body)) {
                        record.raw_text = std::move(*content);
                        record.transport_status = TransportStatus::Ok;
                        break;
                    }
                    spdlog::warn("{}#{}: malformed completion body", record.prompt_id, record.sample_index);
                } else {
                    spdlog::warn("{}#{}: attempt {} failed with status {}", record.prompt_id, record.sample_index,
                                 attempt, reply.status);
                    if (!retryable(reply.status)) break;
                }
                if (attempt < config.max_attempts) {
                    std::this_thread::sleep_for(delay);
                    delay *= 2;
                }
            }
            record.timestamp = utc_timestamp();
        }
    };

    const std::size_t threads = std::min(std::max<std::size_t>(config.parallelism, 1), jobs.size());
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    std::ranges::sort(records, [](const ResponseRecord& a, const ResponseRecord& b) {
        return std::tie(a.prompt_id, a.sample_index) < std::tie(b.prompt_id, b.sample_index);
    });
    return records;
}

std::vector<ResponseRecord> sample(std::span<const PromptRecord> prompts, const SamplerConfig& config) {
    if (config.model.empty()) throw ConfigError("a model name is required");
    return sample(prompts, config, http_transport(config, api_key_from_env(config)));
}

json response_to_json(const ResponseRecord& r) {
    return {{"prompt_id", r.prompt_id},
            {"sample_index", r.sample_index},
            {"model_name", r.model_name},
            {"temperature", r.temperature},
            {"raw_text", r.raw_text},
            {"timestamp", r.timestamp},
            {"transport_status", r.transport_status == TransportStatus::Ok ? "ok" : "failed"}};
}

ResponseRecord response_from_json(const json& j) {
    try {
        ResponseRecord r;
        r.prompt_id = j.at("prompt_id").get<std::string>();
        r.sample_index = j.value("sample_index", std::size_t{0});
        r.model_name = j.value("model_name", std::string("unknown"));
        r.temperature = j.value("temperature", 0.0);
        r.raw_text = j.value("raw_text", std::string());
        r.timestamp = j.value("timestamp", std::string());
        const std::string status = j.value("transport_status", std::string("ok"));
        if (status != "ok" && status != "failed") throw ConfigError("bad transport_status " + status);
        r.transport_status = status == "ok" ? TransportStatus::Ok : TransportStatus::Failed;
        return r;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed response record: ") + e.what());
    }
}

void save_responses(std::span<const ResponseRecord> records, const std::filesystem::path& path) {
    JsonlWriter writer(path);
    for (const auto& r : records) writer.write(response_to_json(r));
    writer.close();
}

std::vector<ResponseRecord> load_responses(const std::filesystem::path& path) {
    std::vector<ResponseRecord> out;
    std::size_t row = 0;
    for (const auto& j : read_jsonl(path)) {
        ++row;
        try {
            out.push_back(response_from_json(j));
        } catch (const ConfigError& e) {
            throw ConfigError(path.string() + " record " + std::to_string(row) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace mused
