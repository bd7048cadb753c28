#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "statechat/lm_backend.hpp"

namespace httplib {
class Server;
}

namespace statechat::testing {

// A local chat-completions endpoint that answers from another backend,
// normally a ScriptedBackend. Failures of that backend become HTTP 500.
class StubLmServer {
public:
    explicit StubLmServer(LmBackend& replies);
    ~StubLmServer();
    StubLmServer(const StubLmServer&) = delete;
    StubLmServer& operator=(const StubLmServer&) = delete;

    std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_); }
    int port() const { return port_; }

    // Last Authorization header and request body seen.
    std::string last_authorization() const;
    std::string last_body() const;
    int requests() const { return requests_.load(); }

    // Replace the reply logic entirely; returns {status, body}.
    void override_with(std::function<std::pair<int, std::string>(const std::string& body)> handler);

private:
    LmBackend& replies_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    int port_ = 0;
    std::atomic<int> requests_{0};
    mutable std::mutex mutex_;
    std::string last_authorization_;
    std::string last_body_;
    std::function<std::pair<int, std::string>(const std::string&)> override_;
};

} // namespace statechat::testing
