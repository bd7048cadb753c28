#include "statechat/service.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "statechat/errors.hpp"
#include "statechat/spec_loader.hpp"
#include "statechat/uuid.hpp"

namespace statechat {

using nlohmann::json;

namespace {

std::string now_iso() {
    using namespace std::chrono;
    const auto now = system_clock::now();
    const auto micros = duration_cast<microseconds>(now.time_since_epoch()).count() % 1000000;
    const std::time_t secs = system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&secs, &tm);
    char buf[40];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
    char out[48];
    std::snprintf(out, sizeof out, "%s.%06ldZ", buf, static_cast<long>(micros));
    return out;
}

ApiResponse error(int status, std::string message) {
    return {status, {{"error", std::move(message)}}};
}

ApiResponse not_found(const std::string& uuid) {
    return error(404, "no state machine with uuid " + uuid);
}

std::optional<json> parse_body(const std::string& body) {
    auto doc = json::parse(body, nullptr, false);
    if (doc.is_discarded()) return std::nullopt;
    return doc;
}

} // namespace

// Exclusive hold on one instance, taken without waiting.
class Service::Lock {
public:
    explicit Lock(std::shared_ptr<std::mutex> m) : mutex_(std::move(m)), owned_(mutex_->try_lock()) {}
    ~Lock() {
        if (owned_) mutex_->unlock();
    }
    Lock(const Lock&) = delete;
    Lock& operator=(const Lock&) = delete;
    explicit operator bool() const { return owned_; }

private:
    std::shared_ptr<std::mutex> mutex_;
    bool owned_;
};

struct Service::Loaded {
    InstanceRecord record;
    AgentInstance instance;
};

Service::Service(std::shared_ptr<InstanceRepository> repository, LmBackend& backend, const Registry& registry,
                 ServiceConfig config, EngineOptions options)
    : repository_(std::move(repository)),
      backend_(backend),
      registry_(registry),
      config_(std::move(config)),
      options_(std::move(options)),
      server_(std::make_unique<httplib::Server>()),
      machines_(std::make_shared<const std::map<std::string, std::shared_ptr<const StateMachine>>>()) {
    install_routes();
}

Service::~Service() {
    stop();
}

ApiResponse Service::create(const std::string& body) {
    auto doc = parse_body(body);
    if (!doc) {
        return {400, {{"error", "invalid machine spec"},
                      {"diagnostics", json::array({Diagnostic{"$", "request body is not valid JSON"}})}}};
    }
    auto loaded = load_machine_spec(*doc, registry_);
    if (!loaded.ok()) return {400, {{"error", "invalid machine spec"}, {"diagnostics", loaded.diagnostics}}};

    const MachineDefinition& def = *loaded.definition;
    if (config_.unique_names) {
        for (const auto& r : repository_->list())
            if (r.name == def.name) return error(409, "a state machine named '" + def.name + "' already exists");
    }

    auto machine = std::make_shared<const StateMachine>(std::move(*loaded.definition));
    const std::string uuid = make_uuid();
    AgentInstance instance = AgentInstance::create(uuid, machine);

    InstanceRecord record;
    record.uuid = uuid;
    record.name = machine->name();
    record.description = machine->description();
    record.status = std::string(to_string(instance.status));
    record.spec = doc->dump();
    record.state = instance_state_to_json(instance).dump();
    record.created_at = record.updated_at = now_iso();
    repository_->save(record);

    {
        std::lock_guard lock(registry_mutex_);
        auto next = std::make_shared<std::map<std::string, std::shared_ptr<const StateMachine>>>(*machines_);
        (*next)[uuid] = machine;
        machines_ = std::move(next);
    }
    return {201, {{"uuid", uuid}}};
}

ApiResponse Service::all() {
    json out = json::array();
    for (const auto& r : repository_->list())
        out.push_back({{"uuid", r.uuid}, {"name", r.name}, {"description", r.description}, {"status", r.status}});
    return {200, out};
}

ApiResponse Service::remove(const std::string& body) {
    auto doc = parse_body(body);
    if (!doc || !doc->is_object() || !doc->contains("uuid") || !(*doc)["uuid"].is_string())
        return error(400, "request body must be {\"uuid\": \"...\"}");
    const auto uuid = (*doc)["uuid"].get<std::string>();

    Lock lock(instance_mutex(uuid));
    if (!lock) return error(409, "a request on " + uuid + " is in flight");
    if (!repository_->remove(uuid)) return not_found(uuid);
    forget(uuid);
    return {200, {{"uuid", uuid}, {"deleted", true}}};
}

ApiResponse Service::info(const std::string& uuid) {
    auto loaded = load(uuid);
    if (!loaded) return not_found(uuid);
    return {200,
            {{"name", loaded->record.name},
             {"description", loaded->record.description},
             {"active", loaded->instance.status == Status::active}}};
}

ApiResponse Service::respond(const std::string& uuid, const std::string& body) {
    auto doc = parse_body(body);
    if (!doc || !doc->is_object() || !doc->contains("content") || !(*doc)["content"].is_string())
        return error(400, "request body must be {\"content\": \"...\"}");

    Lock lock(instance_mutex(uuid));
    if (!lock) return error(409, "a request on " + uuid + " is in flight");
    auto loaded = load(uuid);
    if (!loaded) return not_found(uuid);
    AgentInstance& instance = loaded->instance;
    if (instance.status == Status::ended) return error(422, "the interaction has ended");

    Engine engine(backend_, registry_, options_);
    std::vector<Utterance> replies;
    try {
        if (instance.status == Status::created &&
            instance.machine->state(instance.active_state()).flags.starts_conversation) {
            AgentInstance started = instance;
            engine.start(started);
            replies = engine.respond(started, (*doc)["content"].get<std::string>());
            instance = std::move(started);
        } else {
            replies = engine.respond(instance, (*doc)["content"].get<std::string>());
        }
    } catch (const InteractionEnded& e) {
        return error(422, e.what());
    } catch (const LmFailure& e) {
        return error(502, e.what());
    } catch (const Error& e) {
        return error(500, e.what());
    }

    store(*loaded);
    json content = replies.empty() ? json(nullptr) : json(replies.back().content);
    return {200, {{"content", content}, {"utterances", replies}, {"active", instance.status == Status::active}}};
}

ApiResponse Service::conversation(const std::string& uuid) {
    auto loaded = load(uuid);
    if (!loaded) return not_found(uuid);
    return {200, statechat::conversation(loaded->instance)};
}

ApiResponse Service::reset(const std::string& uuid) {
    Lock lock(instance_mutex(uuid));
    if (!lock) return error(409, "a request on " + uuid + " is in flight");
    auto loaded = load(uuid);
    if (!loaded) return not_found(uuid);
    loaded->instance.reset();
    store(*loaded);
    return {200, {{"uuid", uuid}, {"reset", true}}};
}

ApiResponse Service::get_storage(const std::string& uuid, const std::string& key) {
    auto loaded = load(uuid);
    if (!loaded) return not_found(uuid);
    auto value = loaded->instance.storage.get(key);
    if (!value) return error(404, "no storage value for key '" + key + "'");
    return {200, {{"key", key}, {"value", *value}}};
}

ApiResponse Service::put_storage(const std::string& uuid, const std::string& key, const std::string& body) {
    auto doc = parse_body(body);
    if (!doc || !doc->is_object() || !doc->contains("value"))
        return error(400, "request body must be {\"value\": ...}");
    if (key.empty()) return error(400, "storage keys must not be empty");

    Lock lock(instance_mutex(uuid));
    if (!lock) return error(409, "a request on " + uuid + " is in flight");
    auto loaded = load(uuid);
    if (!loaded) return not_found(uuid);
    const json& value = (*doc)["value"];
    loaded->instance.storage.set(key, value.is_string() ? value.get<std::string>() : value.dump());
    store(*loaded);
    return {200, {{"key", key}, {"value", *loaded->instance.storage.get(key)}}};
}

std::optional<Service::Loaded> Service::load(const std::string& uuid) {
    auto record = repository_->load(uuid);
    if (!record) return std::nullopt;
    auto machine = machine_for(uuid, record->spec);
    auto state = json::parse(record->state);
    AgentInstance instance = instance_from_json(state, uuid, std::move(machine));
    return Loaded{std::move(*record), std::move(instance)};
}

void Service::store(const Loaded& loaded) {
    InstanceRecord record = loaded.record;
    record.status = std::string(to_string(loaded.instance.status));
    record.state = instance_state_to_json(loaded.instance).dump();
    record.updated_at = now_iso();
    repository_->save(record);
}

std::shared_ptr<const StateMachine> Service::machine_for(const std::string& uuid, const std::string& spec) {
    std::shared_ptr<const std::map<std::string, std::shared_ptr<const StateMachine>>> snapshot;
    {
        std::lock_guard lock(registry_mutex_);
        snapshot = machines_;
    }
    if (auto it = snapshot->find(uuid); it != snapshot->end()) return it->second;

    auto machine = compile_machine_spec(json::parse(spec), registry_);
    std::lock_guard lock(registry_mutex_);
    auto next = std::make_shared<std::map<std::string, std::shared_ptr<const StateMachine>>>(*machines_);
    next->emplace(uuid, machine);
    machines_ = std::move(next);
    return machine;
}

std::shared_ptr<std::mutex> Service::instance_mutex(const std::string& uuid) {
    std::lock_guard lock(registry_mutex_);
    auto& m = locks_[uuid];
    if (!m) m = std::make_shared<std::mutex>();
    return m;
}

void Service::forget(const std::string& uuid) {
    std::lock_guard lock(registry_mutex_);
    auto next = std::make_shared<std::map<std::string, std::shared_ptr<const StateMachine>>>(*machines_);
    next->erase(uuid);
    machines_ = std::move(next);
}

void Service::install_routes() {
    auto reply = [](httplib::Response& res, const ApiResponse& api) {
        res.status = api.status;
        res.set_content(api.body.dump(), "application/json");
    };
    constexpr const char* kUuid = "([0-9a-fA-F-]{36})";
    const std::string base = std::string("/") + kUuid;

    server_->Post("/create", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, create(req.body));
    });
    server_->Get("/all", [this, reply](const httplib::Request&, httplib::Response& res) { reply(res, all()); });
    server_->Delete("/delete", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, remove(req.body));
    });
    server_->Get(base + "/info", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, info(req.matches[1]));
    });
    server_->Post(base + "/respond", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, respond(req.matches[1], req.body));
    });
    server_->Get(base + "/conversation", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, conversation(req.matches[1]));
    });
    server_->Put(base + "/reset", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, reset(req.matches[1]));
    });
    server_->Get(base + "/storage/([^/]+)", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, get_storage(req.matches[1], req.matches[2]));
    });
    server_->Put(base + "/storage/([^/]+)", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, put_storage(req.matches[1], req.matches[2], req.body));
    });

    server_->set_exception_handler([reply](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            reply(res, error(500, e.what()));
        } catch (...) {
            reply(res, error(500, "unknown error"));
        }
    });
    server_->set_logger([](const httplib::Request& req, const httplib::Response& res) {
        spdlog::info("request method={} path={} status={} bytes_in={} bytes_out={}", req.method, req.path,
                     res.status, req.body.size(), res.body.size());
    });

    if (!config_.static_dir.empty() && !server_->set_mount_point("/ui", config_.static_dir.string()))
        spdlog::warn("static directory {} not found; /ui disabled", config_.static_dir.string());
}

int Service::bind() {
    if (config_.port == 0) return server_->bind_to_any_port(config_.host);
    return server_->bind_to_port(config_.host, config_.port) ? config_.port : -1;
}

void Service::serve() {
    server_->listen_after_bind();
}

void Service::stop() {
    if (server_ && server_->is_running()) server_->stop();
}

namespace {

template <typename T>
void maybe(const json& doc, const char* key, T& out) {
    if (auto it = doc.find(key); it != doc.end() && !it->is_null()) out = it->get<T>();
}

const char* env(const char* name) {
    const char* v = std::getenv(name);
    return v && *v ? v : nullptr;
}

} // namespace

AppConfig load_app_config(const std::optional<std::filesystem::path>& file) {
    AppConfig cfg;
    if (file) {
        std::ifstream in(*file);
        if (!in) throw Error("cannot open config file " + file->string());
        auto doc = json::parse(in, nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) throw Error("config file " + file->string() + " is not a JSON object");
        maybe(doc, "host", cfg.service.host);
        maybe(doc, "port", cfg.service.port);
        maybe(doc, "unique_names", cfg.service.unique_names);
        std::string s;
        if (maybe(doc, "static_dir", s), !s.empty()) cfg.service.static_dir = s;
        s.clear();
        if (maybe(doc, "store", s), !s.empty()) cfg.store = s;
        maybe(doc, "backend", cfg.backend);
        s.clear();
        if (maybe(doc, "script", s), !s.empty()) cfg.script = s;
        maybe(doc, "lm_base_url", cfg.lm_base_url);
        maybe(doc, "lm_model", cfg.lm_model);
        maybe(doc, "lm_api_key", cfg.lm_api_key);
        maybe(doc, "lm_max_in_flight", cfg.lm_max_in_flight);
    }
    if (auto v = env("STATECHAT_HOST")) cfg.service.host = v;
    if (auto v = env("STATECHAT_PORT")) cfg.service.port = std::stoi(v);
    if (auto v = env("STATECHAT_STORE")) cfg.store = v;
    if (auto v = env("STATECHAT_STATIC_DIR")) cfg.service.static_dir = v;
    if (auto v = env("STATECHAT_LM_BACKEND")) cfg.backend = v;
    if (auto v = env("STATECHAT_LM_SCRIPT")) cfg.script = v;
    if (auto v = env("STATECHAT_LM_BASE_URL")) cfg.lm_base_url = v;
    if (auto v = env("STATECHAT_LM_MODEL")) cfg.lm_model = v;
    if (auto v = env("PROMISE_LM_API_KEY")) cfg.lm_api_key = v;
    if (cfg.backend != "scripted" && cfg.backend != "http")
        throw Error("backend must be 'scripted' or 'http', not '" + cfg.backend + "'");
    return cfg;
}

} // namespace statechat
