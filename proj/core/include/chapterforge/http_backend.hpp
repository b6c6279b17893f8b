#pragma once

#include <string>

#include "chapterforge/generate.hpp"

namespace chapterforge {

// Environment variable read for the bearer token; requests go out without an
// Authorization header when it is unset.
inline constexpr const char* kApiKeyEnvVar = "CHAPTERFORGE_API_KEY";

struct HttpBackendConfig {
    std::string base_url;  // e.g. "http://localhost:8000" or "https://host/prefix"
    std::string model;
    int retries = 3;                  // re-attempts after a transient failure
    int retry_initial_delay_ms = 200; // doubles per retry
    int timeout_seconds = 120;
};

// OpenAI-compatible chat-completions client. Sends the prompt as a single
// user message to {base_url}/v1/chat/completions and reads
// choices[0].message.content. Connection failures and 429/5xx statuses are
// retried with exponential backoff; anything else the server says that is not
// a well-formed completion raises ProtocolError.
class HttpBackend : public GeneratorBackend {
public:
    explicit HttpBackend(HttpBackendConfig config);

    GeneratorResponse generate(const GeneratorRequest& request) const override;
    std::string_view name() const override { return "http"; }

    const HttpBackendConfig& config() const { return config_; }

private:
    HttpBackendConfig config_;
    std::string origin_;       // scheme://host[:port]
    std::string path_prefix_;  // "" or "/prefix"
};

}  // namespace chapterforge
