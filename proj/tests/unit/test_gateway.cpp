#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "mused/gateway.hpp"
#include "mused/jsonl.hpp"

using namespace mused;
using namespace std::chrono_literals;

namespace {

std::vector<PromptRecord> prompts(std::size_t n) {
    std::vector<PromptRecord> out;
    for (std::size_t i = 0; i < n; ++i) {
        PromptRecord p;
        p.id = "p" + std::to_string(100 + i);
        p.text = "prompt text " + std::to_string(i);
        out.push_back(p);
    }
    return out;
}

std::string completion(const std::string& content) {
    return nlohmann::json{{"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}}}.dump();
}

SamplerConfig fast_config() {
    SamplerConfig c;
    c.model = "fake-model";
    c.initial_backoff = 1ms;
    return c;
}

}  // namespace

TEST_CASE("request body and completion extraction") {
    const auto body = chat_request_body({"m", "hello", 0.3, 64});
    CHECK(body["model"] == "m");
    CHECK(body["messages"][0]["role"] == "user");
    CHECK(body["messages"][0]["content"] == "hello");
    CHECK(body["temperature"] == 0.3);
    CHECK(body["max_tokens"] == 64);
    CHECK(extract_completion(completion("hi")) == "hi");
    CHECK_FALSE(extract_completion("not json"));
    CHECK_FALSE(extract_completion(R"({"choices": []})"));
}

TEST_CASE("samples every prompt the requested number of times, in key order") {
    auto config = fast_config();
    config.samples_per_prompt = 3;
    const auto ps = prompts(7);
    const auto records = sample(ps, config, [](const ChatRequest& r) { return HttpReply{200, completion("re: " + r.prompt)}; });
    REQUIRE(records.size() == 21);
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(records[i].prompt_id == ps[i / 3].id);
        CHECK(records[i].sample_index == i % 3);
        CHECK(records[i].raw_text == "re: " + ps[i / 3].text);
        CHECK(records[i].transport_status == TransportStatus::Ok);
        CHECK(records[i].model_name == "fake-model");
        CHECK_FALSE(records[i].timestamp.empty());
    }
}

TEST_CASE("in-flight requests stay within the parallelism bound") {
    auto config = fast_config();
    config.parallelism = 3;
    std::atomic<int> in_flight{0}, peak{0};
    const auto records = sample(prompts(30), config, [&](const ChatRequest&) {
        const int now = ++in_flight;
        int seen = peak.load();
        while (now > seen && !peak.compare_exchange_weak(seen, now)) {
        }
        std::this_thread::sleep_for(3ms);
        --in_flight;
        return HttpReply{200, completion("ok")};
    });
    CHECK(records.size() == 30);
    CHECK(peak.load() <= 3);
    CHECK(peak.load() >= 2);
}

TEST_CASE("retries transient failures and gives up on permanent ones") {
    auto config = fast_config();
    config.max_attempts = 4;
    std::mutex mu;
    std::map<std::string, int> calls;
    const auto records = sample(prompts(3), config, [&](const ChatRequest& r) {
        std::lock_guard lock(mu);
        const int n = ++calls[r.prompt];
        if (r.prompt.ends_with("0")) return n < 3 ? HttpReply{503, "busy"} : HttpReply{200, completion("late")};
        if (r.prompt.ends_with("1")) return HttpReply{401, "denied"};
        return HttpReply{200, "{malformed"};
    });
    CHECK(records[0].transport_status == TransportStatus::Ok);
    CHECK(records[0].raw_text == "late");
    CHECK(calls["prompt text 0"] == 3);
    CHECK(records[1].transport_status == TransportStatus::Failed);
    CHECK(records[1].raw_text.empty());
    CHECK(calls["prompt text 1"] == 1);
    CHECK(records[2].transport_status == TransportStatus::Failed);
    CHECK(calls["prompt text 2"] == 4);
}

TEST_CASE("missing credentials are a configuration error") {
    auto config = fast_config();
    config.api_key_env = "MUSED_TEST_SURELY_UNSET_KEY";
    ::unsetenv(config.api_key_env.c_str());
    CHECK_THROWS_AS(api_key_from_env(config), ConfigError);
    CHECK_THROWS_AS(sample(prompts(1), config), ConfigError);
    ::setenv(config.api_key_env.c_str(), "secret", 1);
    CHECK(api_key_from_env(config) == "secret");
    config.model.clear();
    CHECK_THROWS_AS(sample(prompts(1), config), ConfigError);
    ::unsetenv(config.api_key_env.c_str());
}

TEST_CASE("talks to a real chat-completions server") {
    httplib::Server server;
    std::atomic<int> hits{0};
    std::string auth;
    std::mutex mu;
    server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
        const auto body = nlohmann::json::parse(req.body);
        {
            std::lock_guard lock(mu);
            auth = req.get_header_value("Authorization");
        }
        if (++hits == 1) {
            res.status = 500;
            return;
        }
        res.set_content(completion("echo " + body["messages"][0]["content"].get<std::string>() + " @" +
                                   body["model"].get<std::string>()),
                        "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread runner([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    auto config = fast_config();
    config.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
    config.parallelism = 2;
    config.timeout = 5s;
    const auto records = sample(prompts(4), config, http_transport(config, "tok"));
    server.stop();
    runner.join();

    REQUIRE(records.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(records[i].transport_status == TransportStatus::Ok);
        CHECK(records[i].raw_text == "echo prompt text " + std::to_string(i) + " @fake-model");
    }
    CHECK(hits.load() == 5);
    CHECK(auth == "Bearer tok");

    // Nobody listening: every attempt fails, the batch still completes.
    config.max_attempts = 2;
    const auto failed = sample(prompts(2), config, http_transport(config, ""));
    CHECK(failed.size() == 2);
    CHECK(failed[0].transport_status == TransportStatus::Failed);
    CHECK_THROWS_AS(http_transport(SamplerConfig{.endpoint = "localhost:80"}, ""), ConfigError);
}

TEST_CASE("responses persist as JSONL") {
    const auto dir = std::filesystem::temp_directory_path() / "mused_gateway_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "responses.jsonl";
    auto config = fast_config();
    config.samples_per_prompt = 2;
    const auto records = sample(prompts(3), config, [](const ChatRequest&) { return HttpReply{200, completion("x\ny")}; });
    save_responses(records, path);
    CHECK(load_responses(path) == records);

    {
        std::ofstream out(path, std::ios::app);
        out << "\n{\"prompt_id\": \"p\", oops\n";
    }
    try {
        load_responses(path);
        FAIL("corrupt line accepted");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find(":8:") != std::string::npos);
    }
    CHECK_THROWS_AS(load_responses(dir / "missing.jsonl"), IoError);
    std::filesystem::remove_all(dir);
}
