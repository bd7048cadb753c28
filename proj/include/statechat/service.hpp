#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "statechat/engine.hpp"
#include "statechat/repository.hpp"

namespace httplib {
class Server;
}

namespace statechat {

struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    // Reject /create when an instance with the same name exists.
    bool unique_names = false;
    // Served under /ui when set.
    std::filesystem::path static_dir;
};

struct ApiResponse {
    int status = 200;
    nlohmann::json body;
};

// REST front of the engine. Every instance lives in the repository and is
// loaded, advanced and saved per request, so the process holds no
// conversation state of its own. Requests on one uuid are serialized;
// a second request arriving while one is in flight gets 409.
//
//   POST   /create               MachineSpec         -> 201 {uuid}
//   GET    /all                                      -> [{uuid,name,description,status}]
//   DELETE /delete               {uuid}              -> {uuid}
//   GET    /{uuid}/info                              -> {name,description,active}
//   POST   /{uuid}/respond       {content}           -> {content,utterances,active}
//   GET    /{uuid}/conversation                      -> [utterance]
//   PUT    /{uuid}/reset                             -> {uuid}
//   GET    /{uuid}/storage/{key}                     -> {key,value}
//   PUT    /{uuid}/storage/{key} {value}             -> {key,value}
class Service {
public:
    Service(std::shared_ptr<InstanceRepository> repository, LmBackend& backend,
            const Registry& registry, ServiceConfig config = {}, EngineOptions options = {});
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    ApiResponse create(const std::string& body);
    ApiResponse all();
    ApiResponse remove(const std::string& body);
    ApiResponse info(const std::string& uuid);
    ApiResponse respond(const std::string& uuid, const std::string& body);
    ApiResponse conversation(const std::string& uuid);
    ApiResponse reset(const std::string& uuid);
    ApiResponse get_storage(const std::string& uuid, const std::string& key);
    ApiResponse put_storage(const std::string& uuid, const std::string& key, const std::string& body);

    // Binds to config.host:config.port (0 picks a free port) and returns
    // the bound port, or -1 on failure.
    int bind();
    // Blocks until stop().
    void serve();
    void stop();

private:
    class Lock;
    struct Loaded;

    std::optional<Loaded> load(const std::string& uuid);
    void store(const Loaded& loaded);
    std::shared_ptr<const StateMachine> machine_for(const std::string& uuid, const std::string& spec);
    std::shared_ptr<std::mutex> instance_mutex(const std::string& uuid);
    void forget(const std::string& uuid);
    void install_routes();

    std::shared_ptr<InstanceRepository> repository_;
    LmBackend& backend_;
    const Registry& registry_;
    ServiceConfig config_;
    EngineOptions options_;
    std::unique_ptr<httplib::Server> server_;

    std::mutex registry_mutex_;
    std::map<std::string, std::shared_ptr<std::mutex>> locks_;
    // Copy-on-write cache of compiled machines by uuid.
    std::shared_ptr<const std::map<std::string, std::shared_ptr<const StateMachine>>> machines_;
};

// Loads service settings from an optional JSON file, then applies
// environment overrides (STATECHAT_HOST, STATECHAT_PORT, STATECHAT_STORE,
// STATECHAT_LM_BACKEND, STATECHAT_LM_SCRIPT, STATECHAT_LM_BASE_URL,
// STATECHAT_LM_MODEL, PROMISE_LM_API_KEY, STATECHAT_STATIC_DIR).
struct AppConfig {
    ServiceConfig service;
    std::filesystem::path store = "statechat.db";
    std::string backend = "scripted";  // or "http"
    std::filesystem::path script;
    std::string lm_base_url = "http://127.0.0.1:8081";
    std::string lm_model;
    std::string lm_api_key;
    int lm_max_in_flight = 4;
};

AppConfig load_app_config(const std::optional<std::filesystem::path>& file);

} // namespace statechat
