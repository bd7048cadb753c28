#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "statechat/errors.hpp"
#include "statechat/machine.hpp"
#include "statechat/registry.hpp"

namespace statechat {

// A problem in a machine spec document. `path` is a JSON path such as
// "$.root.states[0].transitions[1].target".
struct Diagnostic {
    std::string path;
    std::string message;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

void to_json(nlohmann::json& j, const Diagnostic& d);

struct SpecLoadResult {
    std::optional<MachineDefinition> definition;  // set iff diagnostics is empty
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return diagnostics.empty(); }
};

// Parses and validates a machine spec document:
//
//   {
//     "name": "...", "description": "...",
//     "storage": {"key": "value" | <json>},           optional seed storage
//     "root": {"initial": "A", "states": [ <state>, ... ]}
//   }
//
//   <state> = {"name", "kind": "state" | "outer" | "single_choice" | "activity_gap_inquiry",
//              "prompt", "starter_prompt", "starts_conversation", "oblivious",
//              "auto_transit", "transitions": [...], "inner": {"initial", "states"}, ...}
//   transition = {"decisions": [...], "actions": [...], "target": <target>}
//   decision   = {"kind": "static" | "dynamic", "prompt"} | {"kind": "predicate", "id"}
//   action     = {"kind": "static_extraction" | "dynamic_extraction", "prompt", "key"}
//              | {"kind": "effect", "id"}
//   target     = {"kind": "state", "name"} | {"kind": "final"} | {"kind": "history", "state"}
//
// Every problem found is reported; loading does not stop at the first one.
SpecLoadResult load_machine_spec(const nlohmann::json& doc, const Registry& registry);

class SpecError : public Error {
public:
    explicit SpecError(std::vector<Diagnostic> diagnostics);
    const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

// Loads and compiles, throwing SpecError on any diagnostic.
std::shared_ptr<const StateMachine> compile_machine_spec(const nlohmann::json& doc,
                                                         const Registry& registry);

// Reads a JSON file; parse failures become a SpecError at path "$".
nlohmann::json read_json_file(const std::filesystem::path& path);

} // namespace statechat
