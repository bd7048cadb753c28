#include "statechat/spec_loader.hpp"

#include <fstream>
#include <map>

#include "statechat/states_library.hpp"

namespace statechat {

using nlohmann::json;

namespace {

std::string index_path(const std::string& base, const char* member, std::size_t i) {
    return base + "." + member + "[" + std::to_string(i) + "]";
}

class Loader {
public:
    explicit Loader(const Registry& registry) : registry_(registry) {}

    SpecLoadResult run(const json& doc) {
        SpecLoadResult result;
        if (!doc.is_object()) {
            report("$", "machine spec must be a JSON object");
            result.diagnostics = std::move(diagnostics_);
            return result;
        }

        MachineDefinition def;
        def.name = required_string(doc, "$", "name");
        def.description = optional_string(doc, "$", "description");
        if (def.name.empty() && doc.contains("name") && doc["name"].is_string())
            report("$.name", "machine name must not be empty");
        load_storage(doc, def.initial_storage);

        if (!doc.contains("root")) {
            report("$.root", "missing root machine");
        } else if (auto root = region(doc["root"], "$.root")) {
            def.root = std::move(*root);
        }
        resolve_targets();

        result.diagnostics = std::move(diagnostics_);
        if (result.diagnostics.empty()) result.definition = std::move(def);
        return result;
    }

private:
    struct RegionInfo {
        std::map<std::string, bool> states;  // name -> is outer
    };

    struct PendingTarget {
        std::string path;
        Target target;
        std::size_t region;
    };

    void report(std::string path, std::string message) {
        diagnostics_.push_back({std::move(path), std::move(message)});
    }

    std::string required_string(const json& obj, const std::string& path, const char* key) {
        auto it = obj.find(key);
        if (it == obj.end()) {
            report(path + "." + key, std::string("missing required string '") + key + "'");
            return {};
        }
        if (!it->is_string()) {
            report(path + "." + key, std::string("'") + key + "' must be a string");
            return {};
        }
        return it->get<std::string>();
    }

    std::string non_empty_string(const json& obj, const std::string& path, const char* key) {
        auto value = required_string(obj, path, key);
        if (value.empty() && obj.contains(key) && obj[key].is_string())
            report(path + "." + key, std::string("'") + key + "' must not be empty");
        return value;
    }

    std::string optional_string(const json& obj, const std::string& path, const char* key) {
        auto it = obj.find(key);
        if (it == obj.end()) return {};
        if (!it->is_string()) {
            report(path + "." + key, std::string("'") + key + "' must be a string");
            return {};
        }
        return it->get<std::string>();
    }

    bool optional_bool(const json& obj, const std::string& path, const char* key) {
        auto it = obj.find(key);
        if (it == obj.end()) return false;
        if (!it->is_boolean()) {
            report(path + "." + key, std::string("'") + key + "' must be a boolean");
            return false;
        }
        return it->get<bool>();
    }

    PromptTemplate prompt(const json& obj, const std::string& path, const char* key, bool required) {
        std::string text = required ? required_string(obj, path, key) : optional_string(obj, path, key);
        for (const auto& p : find_placeholders(text))
            if (!p.filter.empty() && p.filter != "bullets")
                report(path + "." + key, "unknown placeholder filter '" + p.filter + "' in {" + p.key + "|" +
                                             p.filter + "}");
        return PromptTemplate(std::move(text));
    }

    void load_storage(const json& doc, InteractionStorage& storage) {
        auto it = doc.find("storage");
        if (it == doc.end()) return;
        if (!it->is_object()) {
            report("$.storage", "storage must be an object");
            return;
        }
        for (const auto& [key, value] : it->items()) {
            if (key.empty()) {
                report("$.storage", "storage keys must not be empty");
                continue;
            }
            storage.set(key, value.is_string() ? value.get<std::string>() : value.dump());
        }
    }

    std::optional<Region> region(const json& obj, const std::string& path) {
        if (!obj.is_object()) {
            report(path, "machine must be an object with 'initial' and 'states'");
            return std::nullopt;
        }
        const std::size_t id = regions_.size();
        regions_.emplace_back();

        Region out;
        out.initial = required_string(obj, path, "initial");
        auto states = obj.find("states");
        if (states == obj.end() || !states->is_array() || states->empty()) {
            report(path + ".states", "machine needs a non-empty 'states' array");
            return std::nullopt;
        }
        for (std::size_t i = 0; i < states->size(); ++i)
            if (auto node = state((*states)[i], index_path(path, "states", i), id)) out.states.push_back(std::move(*node));

        if (!out.initial.empty() && !regions_[id].states.contains(out.initial))
            report(path + ".initial", "initial state '" + out.initial + "' is not a state of this machine");
        return out;
    }

    std::optional<StateNode> state(const json& obj, const std::string& path, std::size_t region_id) {
        if (!obj.is_object()) {
            report(path, "state must be an object");
            return std::nullopt;
        }
        const std::string name = non_empty_string(obj, path, "name");
        const std::string kind = obj.contains("kind") ? optional_string(obj, path, "kind") : "state";

        if (!name.empty()) {
            if (auto [it, fresh] = declared_.emplace(name, path); !fresh)
                report(path + ".name", "duplicate state name '" + name + "' (first declared at " + it->second + ")");
            regions_[region_id].states[name] = kind == "outer";
        }
        if (kind != "outer" && obj.contains("inner"))
            report(path + ".inner", "only outer states may contain an inner machine");

        StateNode node;
        if (kind == "state" || kind == "outer") {
            node.name = name;
            node.state_prompt = prompt(obj, path, "prompt", kind == "state");
            if (obj.contains("starter_prompt")) node.starter_prompt = prompt(obj, path, "starter_prompt", true);
        } else if (kind == "single_choice") {
            SingleChoiceParams params{name, target_at(obj, path, "next", region_id),
                                      non_empty_string(obj, path, "options_key"),
                                      non_empty_string(obj, path, "chosen_key")};
            node = make_single_choice_state(params);
        } else if (kind == "activity_gap_inquiry") {
            ActivityGapInquiryParams params{name, target_at(obj, path, "next", region_id),
                                            non_empty_string(obj, path, "missed_key"),
                                            non_empty_string(obj, path, "reason_key")};
            node = make_activity_gap_inquiry_state(params);
        } else {
            report(path + ".kind", "unknown state kind '" + kind + "'");
            return std::nullopt;
        }

        if (obj.contains("starts_conversation"))
            node.flags.starts_conversation = optional_bool(obj, path, "starts_conversation");
        node.flags.oblivious = optional_bool(obj, path, "oblivious");
        node.flags.auto_transit = optional_bool(obj, path, "auto_transit");
        if (node.flags.starts_conversation && !node.starter_prompt)
            report(path + ".starts_conversation", "state '" + name + "' starts the conversation but has no starter_prompt");

        if (auto ts = obj.find("transitions"); ts != obj.end()) {
            if (!ts->is_array()) {
                report(path + ".transitions", "transitions must be an array");
            } else {
                for (std::size_t i = 0; i < ts->size(); ++i)
                    if (auto t = transition((*ts)[i], index_path(path, "transitions", i), region_id))
                        node.transitions.push_back(std::move(*t));
            }
        }

        if (kind == "outer") {
            if (!obj.contains("inner")) {
                report(path + ".inner", "outer state '" + name + "' needs an inner machine");
            } else if (auto inner = region(obj["inner"], path + ".inner")) {
                node.inner = std::move(*inner);
            }
        }
        return node;
    }

    std::optional<Transition> transition(const json& obj, const std::string& path, std::size_t region_id) {
        if (!obj.is_object()) {
            report(path, "transition must be an object");
            return std::nullopt;
        }
        Transition t;
        if (auto ds = obj.find("decisions"); ds != obj.end()) {
            if (!ds->is_array()) report(path + ".decisions", "decisions must be an array");
            else
                for (std::size_t i = 0; i < ds->size(); ++i)
                    if (auto d = decision((*ds)[i], index_path(path, "decisions", i))) t.decisions.push_back(std::move(*d));
        }
        if (auto as = obj.find("actions"); as != obj.end()) {
            if (!as->is_array()) report(path + ".actions", "actions must be an array");
            else
                for (std::size_t i = 0; i < as->size(); ++i)
                    if (auto a = action((*as)[i], index_path(path, "actions", i))) t.actions.push_back(std::move(*a));
        }
        t.target = target_at(obj, path, "target", region_id);
        return t;
    }

    std::optional<Decision> decision(const json& obj, const std::string& path) {
        if (!obj.is_object()) {
            report(path, "decision must be an object");
            return std::nullopt;
        }
        const std::string kind = required_string(obj, path, "kind");
        if (kind == "static") return Decision::static_prompt(prompt(obj, path, "prompt", true));
        if (kind == "dynamic") return Decision::dynamic_prompt(prompt(obj, path, "prompt", true));
        if (kind == "predicate") {
            std::string id = non_empty_string(obj, path, "id");
            if (!id.empty() && !registry_.has_predicate(id)) report(path + ".id", "unknown predicate '" + id + "'");
            return Decision::predicate(std::move(id));
        }
        if (!kind.empty()) report(path + ".kind", "unknown decision kind '" + kind + "'");
        return std::nullopt;
    }

    std::optional<Action> action(const json& obj, const std::string& path) {
        if (!obj.is_object()) {
            report(path, "action must be an object");
            return std::nullopt;
        }
        const std::string kind = required_string(obj, path, "kind");
        if (kind == "static_extraction" || kind == "dynamic_extraction") {
            auto p = prompt(obj, path, "prompt", true);
            auto key = non_empty_string(obj, path, "key");
            return kind == "static_extraction" ? Action::static_extraction(std::move(p), std::move(key))
                                               : Action::dynamic_extraction(std::move(p), std::move(key));
        }
        if (kind == "effect") {
            std::string id = non_empty_string(obj, path, "id");
            if (!id.empty() && !registry_.has_effect(id)) report(path + ".id", "unknown effect '" + id + "'");
            return Action::effect(std::move(id));
        }
        if (!kind.empty()) report(path + ".kind", "unknown action kind '" + kind + "'");
        return std::nullopt;
    }

    Target target_at(const json& obj, const std::string& owner, const char* key, std::size_t region_id) {
        const std::string path = owner + "." + key;
        auto it = obj.find(key);
        if (it == obj.end()) {
            report(path, std::string("missing '") + key + "'");
            return Target::final_node();
        }
        const json& t = *it;
        if (!t.is_object() || !t.contains("kind") || !t["kind"].is_string()) {
            report(path, "target must be an object with a 'kind' of state, final or history");
            return Target::final_node();
        }
        const auto kind = t["kind"].get<std::string>();
        Target target;
        if (kind == "final") {
            return Target::final_node();
        } else if (kind == "state") {
            target = Target::state(t.contains("name") && t["name"].is_string() ? t["name"].get<std::string>() : "");
            if (target.name.empty()) {
                report(path + ".name", "state target needs a non-empty 'name'");
                return target;
            }
        } else if (kind == "history") {
            target = Target::history(t.contains("state") && t["state"].is_string() ? t["state"].get<std::string>() : "");
            if (target.name.empty()) {
                report(path + ".state", "history target must name the outer state it re-enters");
                return target;
            }
        } else {
            report(path + ".kind", "unknown target kind '" + kind + "'");
            return Target::final_node();
        }
        pending_.push_back({path, target, region_id});
        return target;
    }

    void resolve_targets() {
        for (const auto& p : pending_) {
            const auto& states = regions_[p.region].states;
            auto found = states.find(p.target.name);
            if (p.target.kind == Target::Kind::state) {
                if (found == states.end())
                    report(p.path, "dangling target: no state '" + p.target.name + "' in the enclosing machine");
            } else if (found == states.end() || !found->second) {
                report(p.path, "history target '" + p.target.name +
                                   "' is not an outer state of the enclosing machine");
            }
        }
    }

    const Registry& registry_;
    std::vector<Diagnostic> diagnostics_;
    std::vector<RegionInfo> regions_;
    std::vector<PendingTarget> pending_;
    std::map<std::string, std::string> declared_;
};

std::string summarize(const std::vector<Diagnostic>& diagnostics) {
    std::string out = "invalid machine spec";
    for (const auto& d : diagnostics) out += "\n  " + d.path + ": " + d.message;
    return out;
}

} // namespace

void to_json(json& j, const Diagnostic& d) {
    j = {{"path", d.path}, {"message", d.message}};
}

SpecLoadResult load_machine_spec(const json& doc, const Registry& registry) {
    return Loader(registry).run(doc);
}

SpecError::SpecError(std::vector<Diagnostic> diagnostics)
    : Error(summarize(diagnostics)), diagnostics_(std::move(diagnostics)) {}

std::shared_ptr<const StateMachine> compile_machine_spec(const json& doc, const Registry& registry) {
    auto loaded = load_machine_spec(doc, registry);
    if (!loaded.ok()) throw SpecError(std::move(loaded.diagnostics));
    return std::make_shared<const StateMachine>(std::move(*loaded.definition));
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SpecError({{"$", "cannot open " + path.string()}});
    auto doc = json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw SpecError({{"$", path.string() + " is not valid JSON"}});
    return doc;
}

} // namespace statechat
