#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "statechat/prompt.hpp"

namespace statechat {

// A trigger or guard on a transition.
//  - static_prompt:  prompt sent verbatim
//  - dynamic_prompt: prompt rendered against storage first
//  - predicate:      registered code evaluated instead of the LM
struct Decision {
    enum class Kind { static_prompt, dynamic_prompt, predicate };

    Kind kind = Kind::static_prompt;
    PromptTemplate prompt;
    std::string predicate_id;

    static Decision static_prompt(PromptTemplate p) { return {Kind::static_prompt, std::move(p), {}}; }
    static Decision dynamic_prompt(PromptTemplate p) { return {Kind::dynamic_prompt, std::move(p), {}}; }
    static Decision predicate(std::string id) { return {Kind::predicate, {}, std::move(id)}; }

    friend bool operator==(const Decision&, const Decision&) = default;
};

// Executed, in declaration order, when a transition fires.
struct Action {
    enum class Kind { static_extraction, dynamic_extraction, effect };

    Kind kind = Kind::static_extraction;
    PromptTemplate prompt;
    std::string storage_key;
    std::string effect_id;

    static Action static_extraction(PromptTemplate p, std::string key) {
        return {Kind::static_extraction, std::move(p), std::move(key), {}};
    }
    static Action dynamic_extraction(PromptTemplate p, std::string key) {
        return {Kind::dynamic_extraction, std::move(p), std::move(key), {}};
    }
    static Action effect(std::string id) { return {Kind::effect, {}, {}, std::move(id)}; }

    friend bool operator==(const Action&, const Action&) = default;
};

// Where a transition leads. `name` is the target state for `state` and the
// re-entered outer state for `history`.
struct Target {
    enum class Kind { state, final_node, history };

    Kind kind = Kind::final_node;
    std::string name;

    static Target state(std::string n) { return {Kind::state, std::move(n)}; }
    static Target final_node() { return {Kind::final_node, {}}; }
    static Target history(std::string outer) { return {Kind::history, std::move(outer)}; }

    std::string describe() const;

    friend bool operator==(const Target&, const Target&) = default;
};

struct Transition {
    std::vector<Decision> decisions;  // empty: always fires
    std::vector<Action> actions;
    Target target;

    friend bool operator==(const Transition&, const Transition&) = default;
};

struct StateFlags {
    bool starts_conversation = false;
    bool oblivious = false;
    bool auto_transit = false;

    friend bool operator==(const StateFlags&, const StateFlags&) = default;
};

struct StateNode;

// A set of sibling states with one initial state.
struct Region {
    std::string initial;
    std::vector<StateNode> states;

    friend bool operator==(const Region&, const Region&);
};

// A state. When `inner` is present the state is an outer state wrapping
// an inner machine; its prompt is prepended to every inner state prompt.
struct StateNode {
    std::string name;
    PromptTemplate state_prompt;
    std::optional<PromptTemplate> starter_prompt;
    std::vector<Transition> transitions;
    StateFlags flags;
    std::optional<Region> inner;

    bool is_outer() const { return inner.has_value(); }
    const std::string* inner_initial() const { return inner ? &inner->initial : nullptr; }

    friend bool operator==(const StateNode& a, const StateNode& b);
};

struct MachineDefinition {
    std::string name;
    std::string description;
    Region root;
    InteractionStorage initial_storage;
};

// An immutable, indexed machine. Construction assumes a definition that
// passed validation (see spec_loader); unresolved references throw.
class StateMachine {
public:
    explicit StateMachine(MachineDefinition definition);
    StateMachine(const StateMachine&) = delete;
    StateMachine& operator=(const StateMachine&) = delete;

    const MachineDefinition& definition() const { return def_; }
    const std::string& name() const { return def_.name; }
    const std::string& description() const { return def_.description; }

    const StateNode& state(std::string_view name) const;
    const StateNode* find(std::string_view name) const;

    // Enclosing outer state, or nullptr for root-level states.
    const StateNode* parent(std::string_view name) const;

    // Enclosing outer states, outermost first.
    std::vector<const StateNode*> ancestors(std::string_view name) const;

    // `state` followed by its chain of initial inner states.
    std::vector<std::string> initial_descent(std::string_view name) const;

    // Path from the root region's initial state down to a leaf.
    std::vector<std::string> initial_path() const;

    // Whether `state` is `outer` or is transitively contained in it.
    bool contains(std::string_view outer, std::string_view state) const;

    // Every state name in declaration order (depth first).
    const std::vector<std::string>& state_names() const { return order_; }

private:
    struct Entry {
        const StateNode* node = nullptr;
        const StateNode* parent = nullptr;
    };

    void index(const Region& region, const StateNode* parent);
    const StateNode* parent_of_entry(std::string_view name) const;

    MachineDefinition def_;
    std::unordered_map<std::string, Entry> by_name_;
    std::vector<std::string> order_;
};

// Rendered outer prompts, outermost first, then the rendered state prompt.
std::vector<std::string> effective_state_prompt_chain(std::span<const StateNode* const> outer_chain,
                                                      const StateNode& inner_state,
                                                      const InteractionStorage& storage);

} // namespace statechat
