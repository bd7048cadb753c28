#include "statechat/instance.hpp"

#include <algorithm>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "statechat/errors.hpp"

namespace statechat {

namespace {

const Utterances kEmptyLog;

Utterances merged(const AgentInstance& instance, auto&& include) {
    Utterances out;
    for (const auto& [state, log] : instance.logs)
        if (include(state)) out.insert(out.end(), log.begin(), log.end());
    std::sort(out.begin(), out.end(), [](const Utterance& a, const Utterance& b) { return a.seq < b.seq; });
    return out;
}

} // namespace

std::string_view to_string(Status status) {
    switch (status) {
    case Status::created: return "created";
    case Status::active: return "active";
    case Status::ended: return "ended";
    }
    return "created";
}

Status status_from_string(std::string_view text) {
    if (text == "created") return Status::created;
    if (text == "active") return Status::active;
    if (text == "ended") return Status::ended;
    throw std::invalid_argument("unknown status '" + std::string(text) + "'");
}

AgentInstance AgentInstance::create(std::string id, std::shared_ptr<const StateMachine> machine) {
    AgentInstance instance;
    instance.id = std::move(id);
    instance.machine = std::move(machine);
    instance.reset();
    return instance;
}

const Utterances& AgentInstance::log(std::string_view state) const {
    auto it = logs.find(std::string(state));
    return it == logs.end() ? kEmptyLog : it->second;
}

void AgentInstance::reset() {
    current_path = machine->initial_path();
    logs.clear();
    storage = machine->definition().initial_storage;
    status = Status::created;
    last_active_child.clear();
    next_seq = 1;
}

Utterances outer_utterances(const AgentInstance& instance, std::string_view outer) {
    return merged(instance, [&](const std::string& state) { return instance.machine->contains(outer, state); });
}

Utterances conversation(const AgentInstance& instance) {
    return merged(instance, [](const std::string&) { return true; });
}

nlohmann::json instance_state_to_json(const AgentInstance& instance) {
    nlohmann::json logs = nlohmann::json::object();
    for (const auto& [state, log] : instance.logs) logs[state] = log;
    return {
        {"current_path", instance.current_path},
        {"logs", logs},
        {"storage", instance.storage},
        {"status", to_string(instance.status)},
        {"last_active_child", instance.last_active_child},
        {"next_seq", instance.next_seq},
    };
}

AgentInstance instance_from_json(const nlohmann::json& j, std::string id,
                                 std::shared_ptr<const StateMachine> machine) {
    AgentInstance instance;
    instance.id = std::move(id);
    instance.machine = std::move(machine);
    instance.current_path = j.at("current_path").get<std::vector<std::string>>();
    for (const auto& [state, log] : j.at("logs").items()) instance.logs[state] = log.get<Utterances>();
    instance.storage = j.at("storage").get<InteractionStorage>();
    instance.status = status_from_string(j.at("status").get<std::string>());
    instance.last_active_child = j.at("last_active_child").get<std::map<std::string, std::string>>();
    instance.next_seq = j.at("next_seq").get<std::int64_t>();

    if (instance.current_path.empty()) throw Error("instance state has an empty path");
    for (const auto& name : instance.current_path)
        if (!instance.machine->find(name)) throw UnresolvedTarget(name);
    return instance;
}

} // namespace statechat
