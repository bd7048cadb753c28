#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "scenario.hpp"
#include "statechat/errors.hpp"
#include "statechat/scripted_backend.hpp"

using namespace statechat;

namespace {

LmRequest request(std::string system, std::vector<ChatTurn> turns = {}) {
    return {std::move(system), std::move(turns), {}};
}

} // namespace

TEST(ScriptedBackend, FlattenRequest) {
    auto r = request("sys", {{Role::agent, "hi"}, {Role::user, "yo"}});
    EXPECT_EQ(flatten_request(r), "sys\nagent: hi\nuser: yo");
}

TEST(ScriptedBackend, MatchersInOrder) {
    ScriptedBackend lm({ScriptEntry::exact_system("exact", "E"), ScriptEntry::at_index(1, "second"),
                        ScriptEntry::substring("needle", "N")});
    EXPECT_EQ(lm.complete(request("exact")), "E");
    EXPECT_EQ(lm.complete(request("has needle")), "second");
    EXPECT_EQ(lm.complete(request("has needle")), "N");
    EXPECT_EQ(lm.complete(request("x", {{Role::user, "needle in turn"}})), "N");
    EXPECT_THROW(lm.complete(request("exact but longer")), ScriptMiss);
    EXPECT_EQ(lm.requests_served(), 4u);
}

TEST(ScriptedBackend, UsesBudgetAndRewind) {
    ScriptedBackend lm({ScriptEntry::substring("q", "first", 1), ScriptEntry::substring("q", "then")});
    EXPECT_EQ(lm.complete(request("q")), "first");
    EXPECT_EQ(lm.complete(request("q")), "then");
    EXPECT_EQ(lm.complete(request("q")), "then");
    EXPECT_EQ(lm.hits(0), 1u);
    EXPECT_EQ(lm.hits(1), 2u);
    lm.rewind();
    EXPECT_EQ(lm.requests_served(), 0u);
    EXPECT_EQ(lm.complete(request("q")), "first");
}

TEST(ScriptedBackend, MissIsAnLmFailure) {
    ScriptedBackend lm;
    EXPECT_THROW(lm.complete(request("anything")), LmFailure);
}

TEST(ScriptedBackend, ScriptJson) {
    auto entries = nlohmann::json::parse(R"([
      {"matcher": "substring", "pattern": "a", "reply": "A", "uses": 2},
      {"matcher": "exact_system", "pattern": "b", "reply": "B"},
      {"matcher": "sequence_index", "pattern": 3, "reply": "C"}])")
                       .get<std::vector<ScriptEntry>>();
    ASSERT_EQ(entries.size(), 3u);
    EXPECT_EQ(entries[0].uses, 2u);
    EXPECT_EQ(entries[1].matcher, ScriptEntry::Matcher::exact_system);
    EXPECT_EQ(entries[2].index, 3u);
    nlohmann::json back = entries;
    EXPECT_EQ(back.get<std::vector<ScriptEntry>>()[2].index, 3u);
    EXPECT_THROW(nlohmann::json::parse(R"([{"matcher": "regex", "pattern": "a", "reply": "A"}])").get<std::vector<ScriptEntry>>(),
                 std::exception);
}

TEST(ScriptedBackend, ScenarioScriptsLoad) {
    for (const char* name : {"daily_checkin", "activity_gap", "compassion_coach"})
        EXPECT_FALSE(load_script(statechat::testing::scenario_dir(name) / "script.json").empty());
}
