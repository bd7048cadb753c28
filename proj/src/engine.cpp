#include "statechat/engine.hpp"

#include <algorithm>
#include <cctype>

#include "statechat/errors.hpp"

namespace statechat {

std::optional<bool> parse_decision(std::string_view completion) {
    auto alnum = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; };
    std::size_t begin = 0;
    std::size_t end = completion.size();
    while (begin < end && !alnum(completion[begin])) ++begin;
    while (end > begin && !alnum(completion[end - 1])) --end;

    std::string word(completion.substr(begin, end - begin));
    std::transform(word.begin(), word.end(), word.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (word == "YES") return true;
    if (word == "NO") return false;
    return std::nullopt;
}

Engine::Engine(LmBackend& backend, const Registry& registry, EngineOptions options)
    : backend_(backend), registry_(registry), options_(std::move(options)) {}

Utterance Engine::start(AgentInstance& instance) {
    if (instance.status == Status::ended) throw InteractionEnded();
    if (instance.status == Status::active) throw InteractionAlreadyStarted();

    AgentInstance next = instance;
    const StateNode& entry = next.machine->state(next.active_state());
    if (!entry.flags.starts_conversation || !entry.starter_prompt) throw NotAStarterState(entry.name);

    Utterance opener = generate_starter(next, entry);
    next.status = Status::active;
    instance = std::move(next);
    return opener;
}

std::vector<Utterance> Engine::respond(AgentInstance& instance, std::string_view user_input) {
    if (instance.status == Status::ended) throw InteractionEnded();

    AgentInstance next = instance;
    const StateMachine& machine = *next.machine;
    if (next.status == Status::created) {
        if (machine.state(next.active_state()).flags.starts_conversation) throw InteractionNotStarted();
        next.status = Status::active;
    }

    std::vector<Utterance> replies;
    const StateNode& active = machine.state(next.active_state());
    record(next, Role::user, std::string(user_input), active.name);

    auto fired = check_transitions(next, scope_chain(next));
    if (!fired) {
        replies.push_back(generate_response(next, active));
        instance = std::move(next);
        return replies;
    }

    int automatic = 0;
    while (fired) {
        if (auto entry = transit(next, *fired->state, *fired->transition)) replies.push_back(std::move(*entry));
        if (next.status == Status::ended) break;
        if (!machine.state(next.active_state()).flags.auto_transit) break;

        fired = check_transitions(next, scope_chain(next));
        if (fired && ++automatic > options_.auto_transit_cap) throw CycleLimitExceeded(options_.auto_transit_cap);
    }
    instance = std::move(next);
    return replies;
}

std::vector<const StateNode*> Engine::scope_chain(const AgentInstance& instance) const {
    std::vector<const StateNode*> chain;
    chain.reserve(instance.current_path.size());
    for (auto it = instance.current_path.rbegin(); it != instance.current_path.rend(); ++it)
        chain.push_back(&instance.machine->state(*it));
    return chain;
}

std::optional<FiredTransition> Engine::check_transitions(const AgentInstance& instance,
                                                         std::span<const StateNode* const> scope_chain) {
    for (const StateNode* state : scope_chain) {
        if (state->transitions.empty()) continue;
        const Utterances view = view_of(instance, *state);
        for (const auto& transition : state->transitions) {
            bool passes = true;
            for (const auto& decision : transition.decisions) {
                if (!evaluate_decision(decision, view, instance.storage)) {
                    passes = false;
                    break;
                }
            }
            if (passes) return FiredTransition{state, &transition};
        }
    }
    return std::nullopt;
}

bool Engine::evaluate_decision(const Decision& decision, const Utterances& utterances,
                               const InteractionStorage& storage) {
    switch (decision.kind) {
    case Decision::Kind::predicate: {
        const Predicate* fn = registry_.predicate(decision.predicate_id);
        if (!fn) throw UnknownPredicate(decision.predicate_id);
        return (*fn)(utterances, storage);
    }
    case Decision::Kind::static_prompt:
    case Decision::Kind::dynamic_prompt: {
        const std::string prompt = decision.kind == Decision::Kind::dynamic_prompt
                                       ? render_template(decision.prompt, storage)
                                       : decision.prompt.text;
        const std::string completion = complete(compose_decision(prompt, utterances));
        if (auto verdict = parse_decision(completion)) return *verdict;
        throw UnparsableDecision(completion);
    }
    }
    return false;
}

void Engine::execute_action(const Action& action, const Utterances& utterances,
                            InteractionStorage& storage) {
    if (action.kind == Action::Kind::effect) {
        const Effect* fn = registry_.effect(action.effect_id);
        if (!fn) throw UnknownEffect(action.effect_id);
        (*fn)(utterances, storage);
        return;
    }
    const std::string prompt = action.kind == Action::Kind::dynamic_extraction
                                   ? render_template(action.prompt, storage)
                                   : action.prompt.text;
    storage.set(action.storage_key, complete(compose_action(prompt, utterances)));
}

std::optional<Utterance> Engine::transit(AgentInstance& instance, const StateNode& firing_state,
                                         const Transition& transition) {
    const StateMachine& machine = *instance.machine;
    if (observer_.on_fire) observer_.on_fire(instance, firing_state, transition);

    const Utterances view = view_of(instance, firing_state);
    for (const auto& action : transition.actions) execute_action(action, view, instance.storage);

    const Target& target = transition.target;
    if (target.kind == Target::Kind::final_node) {
        const StateNode& active = machine.state(instance.active_state());
        instance.status = Status::ended;
        notify_enter(instance, target);
        const std::string closing =
            complete(compose_closing(prompt_chain(instance, active), instance.log(active.name)));
        return record(instance, Role::agent, closing, active.name);
    }

    auto& path = instance.current_path;
    auto at = std::find(path.begin(), path.end(), firing_state.name);
    if (at == path.end()) throw Error("state '" + firing_state.name + "' is not active");

    const StateNode* destination = machine.find(target.name);
    if (!destination || machine.parent(target.name) != machine.parent(firing_state.name))
        throw UnresolvedTarget(target.describe());
    if (target.kind == Target::Kind::history && !destination->is_outer())
        throw UnresolvedTarget(target.describe());

    const auto index = static_cast<std::size_t>(at - path.begin());
    for (std::size_t k = index; k + 1 < path.size(); ++k)
        if (machine.state(path[k]).is_outer()) instance.last_active_child[path[k]] = path[k + 1];
    path.resize(index);

    if (target.kind == Target::Kind::state) {
        for (auto& name : machine.initial_descent(target.name)) {
            if (machine.state(name).flags.oblivious) instance.logs.erase(name);
            path.push_back(std::move(name));
        }
        notify_enter(instance, target);
        const StateNode& entered = machine.state(path.back());
        if (entered.starter_prompt) return generate_starter(instance, entered);
        return std::nullopt;
    }

    // History: resume the remembered configuration below the outer state.
    const StateNode* node = destination;
    path.push_back(node->name);
    while (node->is_outer()) {
        auto remembered = instance.last_active_child.find(node->name);
        if (remembered == instance.last_active_child.end()) {
            if (node == destination) throw NoHistoryRecorded(node->name);
            node = &machine.state(node->inner->initial);
        } else {
            node = &machine.state(remembered->second);
        }
        path.push_back(node->name);
    }
    notify_enter(instance, target);
    if (firing_state.flags.auto_transit) return generate_response(instance, *node);
    return std::nullopt;
}

std::vector<std::string> Engine::prompt_chain(const AgentInstance& instance, const StateNode& state) const {
    const auto outers = instance.machine->ancestors(state.name);
    return effective_state_prompt_chain(outers, state, instance.storage);
}

Utterances Engine::view_of(const AgentInstance& instance, const StateNode& state) const {
    if (state.is_outer()) return outer_utterances(instance, state.name);
    return instance.log(state.name);
}

std::string Engine::complete(const ComposedPrompt& prompt) {
    try {
        return backend_.complete(LmRequest::from(prompt, options_.decode));
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw LmFailure(e.what());
    }
}

Utterance Engine::record(AgentInstance& instance, Role role, std::string content, const std::string& state) {
    Utterance u{role, std::move(content), state, instance.next_seq++};
    instance.logs[state].push_back(u);
    return u;
}

Utterance Engine::generate_starter(AgentInstance& instance, const StateNode& state) {
    const std::string starter = render_template(*state.starter_prompt, instance.storage);
    const std::string text = complete(compose_starter(prompt_chain(instance, state), starter));
    return record(instance, Role::agent, text, state.name);
}

Utterance Engine::generate_response(AgentInstance& instance, const StateNode& state) {
    const std::string text = complete(compose_response(prompt_chain(instance, state), instance.log(state.name)));
    return record(instance, Role::agent, text, state.name);
}

void Engine::notify_enter(const AgentInstance& instance, const Target& target) const {
    if (observer_.on_enter) observer_.on_enter(instance, target);
}

} // namespace statechat
