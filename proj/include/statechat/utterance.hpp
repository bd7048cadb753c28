#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace statechat {

enum class Role { agent, user };

std::string_view to_string(Role role);
Role role_from_string(std::string_view text);

// One turn of the conversation. `seq` is unique and strictly increasing
// within an agent instance, so it orders turns across state logs.
struct Utterance {
    Role role = Role::agent;
    std::string content;
    std::string state;
    std::int64_t seq = 0;

    friend bool operator==(const Utterance&, const Utterance&) = default;
};

using Utterances = std::vector<Utterance>;

void to_json(nlohmann::json& j, const Utterance& u);
void from_json(const nlohmann::json& j, Utterance& u);

} // namespace statechat
