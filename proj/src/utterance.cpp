#include "statechat/utterance.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

namespace statechat {

std::string_view to_string(Role role) {
    return role == Role::agent ? "agent" : "user";
}

Role role_from_string(std::string_view text) {
    if (text == "agent") return Role::agent;
    if (text == "user") return Role::user;
    throw std::invalid_argument("unknown role '" + std::string(text) + "'");
}

void to_json(nlohmann::json& j, const Utterance& u) {
    j = {{"role", to_string(u.role)}, {"content", u.content}, {"state", u.state}, {"seq", u.seq}};
}

void from_json(const nlohmann::json& j, Utterance& u) {
    u.role = role_from_string(j.at("role").get<std::string>());
    u.content = j.at("content").get<std::string>();
    u.state = j.at("state").get<std::string>();
    u.seq = j.at("seq").get<std::int64_t>();
}

} // namespace statechat
