#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "statechat/machine.hpp"
#include "statechat/storage.hpp"
#include "statechat/utterance.hpp"

namespace statechat {

enum class Status { created, active, ended };

std::string_view to_string(Status status);
Status status_from_string(std::string_view text);

// A running conversation over a machine. Copyable; the machine itself is
// shared and immutable.
struct AgentInstance {
    std::string id;
    std::shared_ptr<const StateMachine> machine;

    // Root-level state first, active innermost state last.
    std::vector<std::string> current_path;
    std::map<std::string, Utterances> logs;
    InteractionStorage storage;
    Status status = Status::created;
    // Outer state name -> inner state that was active when it was exited.
    std::map<std::string, std::string> last_active_child;
    std::int64_t next_seq = 1;

    static AgentInstance create(std::string id, std::shared_ptr<const StateMachine> machine);

    const std::string& active_state() const { return current_path.back(); }
    const Utterances& log(std::string_view state) const;

    // Back to the initial configuration with the machine's seed storage.
    void reset();
};

// Seq-ordered merge of the logs of every state inside `outer` (inclusive).
Utterances outer_utterances(const AgentInstance& instance, std::string_view outer);

// Seq-ordered merge of every log.
Utterances conversation(const AgentInstance& instance);

// Runtime state only; the machine is persisted separately.
nlohmann::json instance_state_to_json(const AgentInstance& instance);
AgentInstance instance_from_json(const nlohmann::json& j, std::string id,
                                 std::shared_ptr<const StateMachine> machine);

} // namespace statechat
