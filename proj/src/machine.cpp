#include "statechat/machine.hpp"

#include "statechat/errors.hpp"

namespace statechat {

std::string Target::describe() const {
    switch (kind) {
    case Kind::state: return name;
    case Kind::final_node: return "final";
    case Kind::history: return "history(" + name + ")";
    }
    return {};
}

bool operator==(const Region& a, const Region& b) {
    return a.initial == b.initial && a.states == b.states;
}

bool operator==(const StateNode& a, const StateNode& b) {
    return a.name == b.name && a.state_prompt == b.state_prompt &&
           a.starter_prompt == b.starter_prompt && a.transitions == b.transitions &&
           a.flags == b.flags && a.inner == b.inner;
}

StateMachine::StateMachine(MachineDefinition definition) : def_(std::move(definition)) {
    index(def_.root, nullptr);
    if (!find(def_.root.initial) || parent_of_entry(def_.root.initial) != nullptr)
        throw UnresolvedTarget(def_.root.initial);
}

void StateMachine::index(const Region& region, const StateNode* parent) {
    for (const auto& node : region.states) {
        if (!by_name_.emplace(node.name, Entry{&node, parent}).second)
            throw Error("duplicate state name '" + node.name + "'");
        order_.push_back(node.name);
        if (node.inner) {
            index(*node.inner, &node);
        }
    }
    for (const auto& node : region.states) {
        if (node.inner) {
            const auto* initial = find(node.inner->initial);
            if (!initial || parent_of_entry(node.inner->initial) != &node)
                throw UnresolvedTarget(node.inner->initial);
        }
    }
}

const StateNode* StateMachine::parent_of_entry(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    return it == by_name_.end() ? nullptr : it->second.parent;
}

const StateNode& StateMachine::state(std::string_view name) const {
    if (const auto* node = find(name)) return *node;
    throw UnresolvedTarget(std::string(name));
}

const StateNode* StateMachine::find(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    return it == by_name_.end() ? nullptr : it->second.node;
}

const StateNode* StateMachine::parent(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) throw UnresolvedTarget(std::string(name));
    return it->second.parent;
}

std::vector<const StateNode*> StateMachine::ancestors(std::string_view name) const {
    std::vector<const StateNode*> chain;
    for (const auto* p = parent(name); p; p = parent(p->name)) chain.push_back(p);
    return {chain.rbegin(), chain.rend()};
}

std::vector<std::string> StateMachine::initial_descent(std::string_view name) const {
    std::vector<std::string> path;
    const StateNode* node = &state(name);
    path.push_back(node->name);
    while (node->inner) {
        node = &state(node->inner->initial);
        path.push_back(node->name);
    }
    return path;
}

std::vector<std::string> StateMachine::initial_path() const {
    return initial_descent(def_.root.initial);
}

bool StateMachine::contains(std::string_view outer, std::string_view state) const {
    if (outer == state) return find(state) != nullptr;
    for (const auto* p = parent(state); p; p = parent(p->name))
        if (p->name == outer) return true;
    return false;
}

std::vector<std::string> effective_state_prompt_chain(std::span<const StateNode* const> outer_chain,
                                                      const StateNode& inner_state,
                                                      const InteractionStorage& storage) {
    std::vector<std::string> chain;
    chain.reserve(outer_chain.size() + 1);
    for (const auto* outer : outer_chain) chain.push_back(render_template(outer->state_prompt, storage));
    chain.push_back(render_template(inner_state.state_prompt, storage));
    return chain;
}

} // namespace statechat
