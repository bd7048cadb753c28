#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "statechat/prompt.hpp"
#include "statechat/utterance.hpp"

namespace statechat {

struct DecodeParams {
    double temperature = 0.0;
    int max_output = 512;

    friend bool operator==(const DecodeParams&, const DecodeParams&) = default;
};

struct ChatTurn {
    Role role = Role::user;
    std::string content;

    friend bool operator==(const ChatTurn&, const ChatTurn&) = default;
};

struct LmRequest {
    std::string system_part;
    std::vector<ChatTurn> turns;
    DecodeParams params;

    static LmRequest from(const ComposedPrompt& prompt, DecodeParams params = {});

    friend bool operator==(const LmRequest&, const LmRequest&) = default;
};

// The single point where composed prompts are spent. Implementations
// return raw completion text and must be safe to call concurrently.
class LmBackend {
public:
    virtual ~LmBackend() = default;
    virtual std::string complete(const LmRequest& request) = 0;
};

// Chat-completions wire role for a turn ("assistant" or "user").
std::string_view wire_role(Role role);

// {"messages":[system, turns...], "temperature":..., "max_tokens":...}
// plus "model" when non-empty.
nlohmann::json serialize_chat(const LmRequest& request, const std::string& model = {});

// Inverse of serialize_chat, for servers that receive such documents.
// Throws LmFailure when the document is not a chat request.
LmRequest parse_chat_request(const nlohmann::json& body);

// Content of the first choice of a chat-completions response.
std::string parse_chat_response(const nlohmann::json& body);

} // namespace statechat
