#pragma once

#include <chrono>
#include <memory>
#include <semaphore>
#include <string>

#include "statechat/lm_backend.hpp"

namespace statechat {

struct HttpBackendConfig {
    // Scheme, host and optional path prefix, e.g. "https://api.example.com/v1".
    std::string base_url = "http://127.0.0.1:8080";
    std::string model;
    // Bearer token; empty sends no Authorization header.
    std::string api_key;
    std::chrono::seconds timeout{60};
    int max_in_flight = 4;
};

// Reads PROMISE_LM_API_KEY into `api_key` when it is set.
HttpBackendConfig with_env_api_key(HttpBackendConfig config);

// Chat-completions client: POST <base_url>/chat/completions.
// Transport errors are retried once; HTTP status errors are not.
class HttpBackend final : public LmBackend {
public:
    explicit HttpBackend(HttpBackendConfig config);
    ~HttpBackend() override;

    std::string complete(const LmRequest& request) override;

private:
    std::string post_once(const std::string& body, bool& transport_error);

    HttpBackendConfig config_;
    std::string scheme_host_port_;
    std::string path_prefix_;
    std::counting_semaphore<> in_flight_;
};

} // namespace statechat
