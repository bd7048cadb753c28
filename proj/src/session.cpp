#include "statechat/session.hpp"

#include <nlohmann/json.hpp>

namespace statechat {

void run_session(Engine& engine, AgentInstance& instance, std::span<const std::string> inputs) {
    if (instance.status == Status::created &&
        instance.machine->state(instance.active_state()).flags.starts_conversation)
        engine.start(instance);
    for (const auto& input : inputs) engine.respond(instance, input);
}

std::string transcript_jsonl(const Utterances& utterances) {
    std::string out;
    for (const auto& u : utterances) {
        nlohmann::ordered_json line;
        line["seq"] = u.seq;
        line["role"] = to_string(u.role);
        line["state"] = u.state;
        line["content"] = u.content;
        out += line.dump();
        out += '\n';
    }
    return out;
}

std::string storage_line(const AgentInstance& instance) {
    nlohmann::ordered_json line;
    line["status"] = to_string(instance.status);
    line["storage"] = nlohmann::ordered_json::object();
    for (const auto& [key, value] : instance.storage.entries()) line["storage"][key] = value;
    return line.dump() + "\n";
}

} // namespace statechat
