#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "statechat/instance.hpp"
#include "statechat/lm_backend.hpp"
#include "statechat/registry.hpp"

namespace statechat {

struct EngineOptions {
    DecodeParams decode;
    // Automatic transitions allowed in one respond call.
    int auto_transit_cap = 8;
};

// A transition selected by check_transitions.
struct FiredTransition {
    const StateNode* state = nullptr;
    const Transition* transition = nullptr;
};

// Notifications from inside an operation. `on_enter` runs after the
// instance's path has been updated and before any entry utterance exists.
struct EngineObserver {
    std::function<void(const AgentInstance&, const StateNode& from, const Transition&)> on_fire;
    std::function<void(const AgentInstance&, const Target&)> on_enter;
};

// YES/NO reading of a decision completion: surrounding whitespace,
// quotes and punctuation are dropped and case is ignored.
std::optional<bool> parse_decision(std::string_view completion);

// Drives agent instances. Stateless apart from its collaborators, so one
// engine serves any number of instances; a single instance must not be
// driven from two threads at once.
//
// start and respond give the strong guarantee: if they throw, the
// instance is unchanged.
class Engine {
public:
    Engine(LmBackend& backend, const Registry& registry, EngineOptions options = {});

    void set_observer(EngineObserver observer) { observer_ = std::move(observer); }

    // Opens the conversation in the initial state with its starter prompt.
    Utterance start(AgentInstance& instance);

    // Handles one user turn. Returns the agent utterances produced, in
    // order; empty when the turn ends in a state that stays silent.
    std::vector<Utterance> respond(AgentInstance& instance, std::string_view user_input);

    // States on the active path, innermost first.
    std::vector<const StateNode*> scope_chain(const AgentInstance& instance) const;

    // First transition whose decisions all pass, innermost state first and
    // declaration order within a state. Decisions short-circuit.
    std::optional<FiredTransition> check_transitions(const AgentInstance& instance,
                                                     std::span<const StateNode* const> scope_chain);

    bool evaluate_decision(const Decision& decision, const Utterances& utterances,
                           const InteractionStorage& storage);

    void execute_action(const Action& action, const Utterances& utterances,
                        InteractionStorage& storage);

    // Runs the transition's actions and moves to its target. Returns the
    // entry utterance or closing message, if one was produced.
    std::optional<Utterance> transit(AgentInstance& instance, const StateNode& firing_state,
                                     const Transition& transition);

    // Rendered prompt chain for a state on the instance's machine.
    std::vector<std::string> prompt_chain(const AgentInstance& instance,
                                          const StateNode& state) const;

    // What a state's decisions and actions look at: its own log, or the
    // aggregated inner conversation for an outer state.
    Utterances view_of(const AgentInstance& instance, const StateNode& state) const;

private:
    std::string complete(const ComposedPrompt& prompt);
    Utterance record(AgentInstance& instance, Role role, std::string content,
                     const std::string& state);
    Utterance generate_starter(AgentInstance& instance, const StateNode& state);
    Utterance generate_response(AgentInstance& instance, const StateNode& state);
    void notify_enter(const AgentInstance& instance, const Target& target) const;

    LmBackend& backend_;
    const Registry& registry_;
    EngineOptions options_;
    EngineObserver observer_;
};

} // namespace statechat
