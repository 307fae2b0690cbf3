#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mused/prompting.hpp"

namespace mused {

enum class TransportStatus { Ok, Failed };

struct ResponseRecord {
    std::string prompt_id;
    std::size_t sample_index = 0;
    std::string model_name;
    double temperature = 0.0;
    std::string raw_text;
    std::string timestamp;
    TransportStatus transport_status = TransportStatus::Ok;

    friend bool operator==(const ResponseRecord&, const ResponseRecord&) = default;
};

struct ChatRequest {
    std::string model;
    std::string prompt;
    double temperature = 0.3;
    int max_tokens = 2048;
};

/// Raw HTTP outcome; status 0 means the request never completed.
struct HttpReply {
    int status = 0;
    std::string body;
};

using ChatTransport = std::function<HttpReply(const ChatRequest&)>;

struct SamplerConfig {
    std::string endpoint = "http://localhost:8000/v1/chat/completions";
    std::string model;
    double temperature = 0.3;
    std::size_t samples_per_prompt = 1;
    std::size_t parallelism = 4;
    int max_attempts = 3;
    std::chrono::milliseconds initial_backoff{1000};
    std::chrono::seconds timeout{120};
    int max_tokens = 2048;
    /// Environment variable holding the bearer token.
    std::string api_key_env = "OPENAI_API_KEY";
};

/// OpenAI-compatible chat-completions request body.
nlohmann::json chat_request_body(const ChatRequest& request);

/// choices[0].message.content of a chat-completions response, if present.
std::optional<std::string> extract_completion(std::string_view body);

/// HTTP(S) transport for `endpoint`, sending `api_key` as a bearer token.
ChatTransport http_transport(const SamplerConfig& config, std::string api_key);

/// Reads config.api_key_env; throws ConfigError when unset.
std::string api_key_from_env(const SamplerConfig& config);

/// samples_per_prompt records per prompt, sorted by (prompt_id, sample_index).
/// At most config.parallelism requests are in flight. Calls that still fail
/// after max_attempts come back with status Failed and empty text.
std::vector<ResponseRecord> sample(std::span<const PromptRecord> prompts, const SamplerConfig& config,
                                   const ChatTransport& transport);

/// Same, over HTTP with the key from the environment.
std::vector<ResponseRecord> sample(std::span<const PromptRecord> prompts, const SamplerConfig& config);

nlohmann::json response_to_json(const ResponseRecord& r);
ResponseRecord response_from_json(const nlohmann::json& j);

void save_responses(std::span<const ResponseRecord> records, const std::filesystem::path& path);
std::vector<ResponseRecord> load_responses(const std::filesystem::path& path);

}  // namespace mused
