#include "statechat/registry.hpp"

namespace statechat {

Registry& Registry::add_predicate(std::string id, Predicate fn) {
    predicates_.insert_or_assign(std::move(id), std::move(fn));
    return *this;
}

Registry& Registry::add_effect(std::string id, Effect fn) {
    effects_.insert_or_assign(std::move(id), std::move(fn));
    return *this;
}

const Predicate* Registry::predicate(std::string_view id) const {
    auto it = predicates_.find(id);
    return it == predicates_.end() ? nullptr : &it->second;
}

const Effect* Registry::effect(std::string_view id) const {
    auto it = effects_.find(id);
    return it == effects_.end() ? nullptr : &it->second;
}

Registry builtin_registry() {
    Registry r;
    r.add_predicate("always", [](const Utterances&, const InteractionStorage&) { return true; });
    r.add_predicate("never", [](const Utterances&, const InteractionStorage&) { return false; });
    r.add_effect("noop", [](const Utterances&, InteractionStorage&) {});
    return r;
}

} // namespace statechat
