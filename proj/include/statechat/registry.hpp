#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>

#include "statechat/storage.hpp"
#include "statechat/utterance.hpp"

namespace statechat {

// Code-backed decisions and actions, referenced from machine specs by id.
// Callables must be reentrant: one registry serves every instance.
using Predicate = std::function<bool(const Utterances&, const InteractionStorage&)>;
using Effect = std::function<void(const Utterances&, InteractionStorage&)>;

class Registry {
public:
    Registry& add_predicate(std::string id, Predicate fn);
    Registry& add_effect(std::string id, Effect fn);

    const Predicate* predicate(std::string_view id) const;
    const Effect* effect(std::string_view id) const;

    bool has_predicate(std::string_view id) const { return predicate(id) != nullptr; }
    bool has_effect(std::string_view id) const { return effect(id) != nullptr; }

private:
    std::map<std::string, Predicate, std::less<>> predicates_;
    std::map<std::string, Effect, std::less<>> effects_;
};

// Predicates "always" and "never"; effect "noop".
Registry builtin_registry();

} // namespace statechat
