#include <filesystem>

#include <gtest/gtest.h>

#include "scenario.hpp"
#include "statechat/spec_loader.hpp"

using namespace statechat;
using nlohmann::json;

namespace {

bool has_diagnostic(const std::vector<Diagnostic>& ds, const std::string& path, const std::string& fragment) {
    for (const auto& d : ds)
        if (d.path == path && d.message.find(fragment) != std::string::npos) return true;
    return false;
}

} // namespace

TEST(SpecLoader, MalformedCorpusPointsAtOffendingPath) {
    const auto dir = statechat::testing::data_dir() / "invalid_specs";
    const json manifest = read_json_file(dir / "expected.json");
    ASSERT_GE(manifest.size(), 10u);
    const Registry registry = builtin_registry();
    for (const auto& c : manifest) {
        const auto file = c["file"].get<std::string>();
        auto result = load_machine_spec(read_json_file(dir / file), registry);
        EXPECT_FALSE(result.ok()) << file;
        EXPECT_FALSE(result.definition) << file;
        EXPECT_TRUE(has_diagnostic(result.diagnostics, c["path"], c["message"]))
            << file << ": expected " << c["path"] << " ~ " << c["message"] << ", got " << json(result.diagnostics).dump();
    }
}

TEST(SpecLoader, ScenarioModelsAreClean) {
    const Registry registry = builtin_registry();
    for (const char* name : {"daily_checkin", "activity_gap", "compassion_coach"}) {
        auto result = load_machine_spec(read_json_file(statechat::testing::scenario_dir(name) / "spec.json"), registry);
        EXPECT_TRUE(result.ok()) << name << ": " << json(result.diagnostics).dump();
    }
}

TEST(SpecLoader, ReportsEveryProblem) {
    auto doc = json::parse(R"({"name": "x", "root": {"initial": "A", "states": [
      {"name": "A", "prompt": "a", "transitions": [{"target": {"kind": "state", "name": "Gone"}}]},
      {"name": "A", "prompt": "b", "starts_conversation": true}]}})");
    auto result = load_machine_spec(doc, builtin_registry());
    EXPECT_TRUE(has_diagnostic(result.diagnostics, "$.root.states[0].transitions[0].target", "dangling"));
    EXPECT_TRUE(has_diagnostic(result.diagnostics, "$.root.states[1].name", "duplicate"));
    EXPECT_TRUE(has_diagnostic(result.diagnostics, "$.root.states[1].starts_conversation", "starter_prompt"));
}

TEST(SpecLoader, NonObjectDocument) {
    auto result = load_machine_spec(json::array(), builtin_registry());
    ASSERT_EQ(result.diagnostics.size(), 1u);
    EXPECT_EQ(result.diagnostics[0].path, "$");
}

TEST(SpecLoader, SeedStorageDumpsStructuredValues) {
    auto result = load_machine_spec(json::parse(R"({"name": "x", "storage": {"s": "text", "n": 3, "l": ["a"]},
        "root": {"initial": "A", "states": [{"name": "A", "prompt": "a"}]}})"),
                                    builtin_registry());
    ASSERT_TRUE(result.ok());
    const auto& seed = result.definition->initial_storage;
    EXPECT_EQ(seed.get("s"), "text");
    EXPECT_EQ(seed.get("n"), "3");
    EXPECT_EQ(seed.get("l"), R"(["a"])");
}

TEST(SpecLoader, LoadsTransitionParts) {
    Registry registry = builtin_registry();
    registry.add_effect("notify", [](const Utterances&, InteractionStorage&) {});
    auto result = load_machine_spec(json::parse(R"({"name": "x", "root": {"initial": "A", "states": [
      {"name": "A", "prompt": "a", "starter_prompt": "s", "starts_conversation": true, "oblivious": true, "auto_transit": true,
       "transitions": [{"decisions": [{"kind": "static", "prompt": "t"}, {"kind": "dynamic", "prompt": "g {k}"}, {"kind": "predicate", "id": "never"}],
                        "actions": [{"kind": "static_extraction", "prompt": "e", "key": "k1"},
                                    {"kind": "dynamic_extraction", "prompt": "d {k}", "key": "k2"},
                                    {"kind": "effect", "id": "notify"}],
                        "target": {"kind": "final"}}]}]}})"),
                                    registry);
    ASSERT_TRUE(result.ok()) << json(result.diagnostics).dump();
    const StateNode& a = result.definition->root.states[0];
    EXPECT_TRUE(a.flags.starts_conversation && a.flags.oblivious && a.flags.auto_transit);
    EXPECT_EQ(a.starter_prompt->text, "s");
    const Transition& t = a.transitions[0];
    EXPECT_EQ(t.decisions, (std::vector<Decision>{Decision::static_prompt("t"), Decision::dynamic_prompt("g {k}"),
                                                  Decision::predicate("never")}));
    EXPECT_EQ(t.actions, (std::vector<Action>{Action::static_extraction("e", "k1"), Action::dynamic_extraction("d {k}", "k2"),
                                              Action::effect("notify")}));
    EXPECT_EQ(t.target, Target::final_node());
}

TEST(SpecLoader, LibraryStatesExpand) {
    auto result = load_machine_spec(json::parse(R"({"name": "x", "root": {"initial": "R", "states": [
      {"name": "R", "kind": "activity_gap_inquiry", "missed_key": "m", "reason_key": "r", "next": {"kind": "state", "name": "C"}},
      {"name": "C", "kind": "single_choice", "options_key": "o", "chosen_key": "c", "next": {"kind": "final"}}]}})"),
                                    builtin_registry());
    ASSERT_TRUE(result.ok()) << json(result.diagnostics).dump();
    const auto& states = result.definition->root.states;
    EXPECT_TRUE(states[0].flags.starts_conversation);
    EXPECT_EQ(states[0].transitions[0].target, Target::state("C"));
    EXPECT_EQ(states[1].transitions[0].actions[0].storage_key, "c");
}

TEST(SpecLoader, CompileThrowsSpecError) {
    try {
        compile_machine_spec(json::parse(R"({"name": "x"})"), builtin_registry());
        FAIL();
    } catch (const SpecError& e) {
        ASSERT_FALSE(e.diagnostics().empty());
        EXPECT_EQ(e.diagnostics()[0].path, "$.root");
    }
}

TEST(SpecLoader, UnreadableFile) {
    EXPECT_THROW(read_json_file("/nonexistent/spec.json"), SpecError);
}
