#include "statechat/lm_backend.hpp"

#include "statechat/errors.hpp"

namespace statechat {

LmRequest LmRequest::from(const ComposedPrompt& prompt, DecodeParams params) {
    LmRequest request;
    request.system_part = prompt.system_part;
    request.turns.reserve(prompt.conversation.size());
    for (const auto& u : prompt.conversation) request.turns.push_back({u.role, u.content});
    request.params = params;
    return request;
}

std::string_view wire_role(Role role) {
    return role == Role::agent ? "assistant" : "user";
}

nlohmann::json serialize_chat(const LmRequest& request, const std::string& model) {
    nlohmann::json messages = nlohmann::json::array();
    messages.push_back({{"role", "system"}, {"content", request.system_part}});
    for (const auto& turn : request.turns)
        messages.push_back({{"role", wire_role(turn.role)}, {"content", turn.content}});

    nlohmann::json doc = {
        {"messages", std::move(messages)},
        {"temperature", request.params.temperature},
        {"max_tokens", request.params.max_output},
    };
    if (!model.empty()) doc["model"] = model;
    return doc;
}

LmRequest parse_chat_request(const nlohmann::json& body) {
    const auto messages = body.find("messages");
    if (messages == body.end() || !messages->is_array() || messages->empty())
        throw LmFailure("chat request has no messages");

    LmRequest request;
    bool first = true;
    for (const auto& m : *messages) {
        if (!m.is_object() || !m.contains("role") || !m.contains("content") || !m["content"].is_string())
            throw LmFailure("malformed chat message");
        const auto role = m["role"].get<std::string>();
        auto content = m["content"].get<std::string>();
        if (first && role == "system") {
            request.system_part = std::move(content);
        } else if (role == "assistant") {
            request.turns.push_back({Role::agent, std::move(content)});
        } else if (role == "user") {
            request.turns.push_back({Role::user, std::move(content)});
        } else {
            throw LmFailure("unexpected chat role '" + role + "'");
        }
        first = false;
    }
    if (auto t = body.find("temperature"); t != body.end() && t->is_number())
        request.params.temperature = t->get<double>();
    if (auto m = body.find("max_tokens"); m != body.end() && m->is_number_integer())
        request.params.max_output = m->get<int>();
    return request;
}

std::string parse_chat_response(const nlohmann::json& body) {
    try {
        const auto& content = body.at("choices").at(0).at("message").at("content");
        if (!content.is_string()) throw LmFailure("completion content is not a string");
        return content.get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw LmFailure(std::string("malformed completion body: ") + e.what());
    }
}

} // namespace statechat
