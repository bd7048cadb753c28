#pragma once

#include <memory>

#include <nlohmann/json.hpp>

#include "statechat/instance.hpp"
#include "statechat/spec_loader.hpp"

namespace statechat::testing {

inline std::shared_ptr<const StateMachine> compile(const std::string& spec_json,
                                                   const Registry& registry = builtin_registry()) {
    return compile_machine_spec(nlohmann::json::parse(spec_json), registry);
}

inline AgentInstance instance_of(const std::string& spec_json, const Registry& registry = builtin_registry()) {
    return AgentInstance::create("test", compile(spec_json, registry));
}

// Deep comparison through the persisted form.
inline bool same_state(const AgentInstance& a, const AgentInstance& b) {
    return instance_state_to_json(a) == instance_state_to_json(b);
}

} // namespace statechat::testing
