#include "chapterforge/http_backend.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "chapterforge/errors.hpp"

namespace chapterforge {

namespace {

using nlohmann::json;

constexpr std::size_t kBodyExcerptBytes = 200;

std::string excerpt(const std::string& body) {
    return body.size() <= kBodyExcerptBytes ? body : body.substr(0, kBodyExcerptBytes) + "...";
}

bool transient_status(int status) {
    return status == 429 || (status >= 500 && status < 600);
}

}  // namespace

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {
    const std::string& url = config_.base_url;
    if (url.rfind("http://", 0) != 0 && url.rfind("https://", 0) != 0) {
        throw ConfigError("backend base_url must start with http:// or https://, got '" + url + "'");
    }
    const std::size_t scheme_end = url.find("//") + 2;
    const std::size_t path_start = url.find('/', scheme_end);
    if (path_start == std::string::npos) {
        origin_ = url;
    } else {
        origin_ = url.substr(0, path_start);
        path_prefix_ = url.substr(path_start);
        while (!path_prefix_.empty() && path_prefix_.back() == '/') {
            path_prefix_.pop_back();
        }
    }
    if (config_.retries < 0) {
        throw ConfigError("backend retries must be non-negative");
    }
}

GeneratorResponse HttpBackend::generate(const GeneratorRequest& request) const {
    json body;
    body["model"] = config_.model;
    body["messages"] = json::array({json{{"role", "user"}, {"content", request.prompt}}});
    body["temperature"] = request.temperature;
    body["max_tokens"] = request.max_output_tokens;
    const std::string payload = body.dump();

    httplib::Headers headers;
    if (const char* key = std::getenv(kApiKeyEnvVar); key != nullptr && key[0] != '\0') {
        headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    const std::string path = path_prefix_ + "/v1/chat/completions";
    const int attempts = config_.retries + 1;
    std::string last_failure = "no attempt made";
    int last_status = 0;

    for (int attempt = 1; attempt <= attempts; ++attempt) {
        if (attempt > 1) {
            const auto delay = std::chrono::milliseconds(
                static_cast<long long>(config_.retry_initial_delay_ms) << (attempt - 2));
            std::this_thread::sleep_for(delay);
        }

        // A fresh client per call keeps the backend shareable across threads.
        httplib::Client client(origin_);
        client.set_connection_timeout(config_.timeout_seconds, 0);
        client.set_read_timeout(config_.timeout_seconds, 0);
        client.set_write_timeout(config_.timeout_seconds, 0);

        httplib::Result result = client.Post(path, headers, payload, "application/json");
        if (!result) {
            last_failure = "connection failure: " + httplib::to_string(result.error());
            last_status = 0;
            continue;
        }
        if (transient_status(result->status)) {
            last_failure = "transient status " + std::to_string(result->status);
            last_status = result->status;
            continue;
        }
        if (result->status < 200 || result->status >= 300) {
            throw ProtocolError("chat completion failed with status " +
                                    std::to_string(result->status),
                                result->status, excerpt(result->body));
        }

        json parsed = json::parse(result->body, nullptr, false);
        if (parsed.is_discarded()) {
            throw ProtocolError("chat completion response is not valid JSON", result->status,
                                excerpt(result->body));
        }
        if (!parsed.contains("choices") || !parsed["choices"].is_array() ||
            parsed["choices"].empty() || !parsed["choices"][0].contains("message") ||
            !parsed["choices"][0]["message"].contains("content") ||
            !parsed["choices"][0]["message"]["content"].is_string()) {
            throw ProtocolError("chat completion response lacks choices[0].message.content",
                                result->status, excerpt(result->body));
        }

        GeneratorResponse response;
        response.raw_text = parsed["choices"][0]["message"]["content"].get<std::string>();
        if (parsed.contains("usage") && parsed["usage"].is_object()) {
            const json& usage = parsed["usage"];
            TokenUsage tokens;
            tokens.prompt_tokens = usage.value("prompt_tokens", 0u);
            tokens.completion_tokens = usage.value("completion_tokens", 0u);
            response.usage = tokens;
        }
        return response;
    }

    if (last_status != 0) {
        throw ProtocolError("chat completion failed after " + std::to_string(attempts) +
                                " attempts; last " + last_failure,
                            last_status, "");
    }
    throw TransportError("chat completion failed after " + std::to_string(attempts) +
                             " attempts; last " + last_failure,
                         attempts);
}

}  // namespace chapterforge
