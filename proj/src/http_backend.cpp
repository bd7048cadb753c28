#include "statechat/http_backend.hpp"

#include <cstdlib>

#include <httplib.h>

#include "statechat/errors.hpp"

namespace statechat {

HttpBackendConfig with_env_api_key(HttpBackendConfig config) {
    if (const char* key = std::getenv("PROMISE_LM_API_KEY"); key && *key) config.api_key = key;
    return config;
}

HttpBackend::HttpBackend(HttpBackendConfig config)
    : config_(std::move(config)), in_flight_(std::max(1, config_.max_in_flight)) {
    std::string url = config_.base_url;
    while (!url.empty() && url.back() == '/') url.pop_back();
    const auto scheme_end = url.find("://");
    const auto path_start = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    scheme_host_port_ = url.substr(0, path_start);
    path_prefix_ = path_start == std::string::npos ? "" : url.substr(path_start);
}

HttpBackend::~HttpBackend() = default;

std::string HttpBackend::complete(const LmRequest& request) {
    const std::string body = serialize_chat(request, config_.model).dump();

    in_flight_.acquire();
    struct Release {
        std::counting_semaphore<>& s;
        ~Release() { s.release(); }
    } release{in_flight_};

    bool transport_error = false;
    std::string reply = post_once(body, transport_error);
    if (transport_error) {
        transport_error = false;
        reply = post_once(body, transport_error);
        if (transport_error) throw LmFailure(reply);
    }
    return reply;
}

std::string HttpBackend::post_once(const std::string& body, bool& transport_error) {
    httplib::Client client(scheme_host_port_);
    if (!client.is_valid()) throw LmFailure("unsupported LM base URL '" + config_.base_url + "'");
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    client.set_write_timeout(config_.timeout);

    httplib::Headers headers;
    if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

    auto result = client.Post(path_prefix_ + "/chat/completions", headers, body, "application/json");
    if (!result) {
        transport_error = true;
        return "LM transport error: " + httplib::to_string(result.error());
    }
    if (result->status != 200)
        throw LmFailure("LM endpoint returned HTTP " + std::to_string(result->status) + ": " +
                        result->body.substr(0, 200));

    auto parsed = nlohmann::json::parse(result->body, nullptr, false);
    if (parsed.is_discarded()) throw LmFailure("LM endpoint returned a non-JSON body");
    return parse_chat_response(parsed);
}

} // namespace statechat
