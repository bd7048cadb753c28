#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "machines.hpp"
#include "statechat/errors.hpp"

using namespace statechat;
using statechat::testing::compile;

namespace {

const char* kSpec = R"({"name": "n", "storage": {"seed": "1"}, "root": {"initial": "O", "states": [
  {"name": "O", "kind": "outer", "prompt": "o", "inner": {"initial": "I", "states": [{"name": "I", "prompt": "i"}, {"name": "J", "prompt": "j"}]}},
  {"name": "Z", "prompt": "z"}]}})";

} // namespace

TEST(Instance, CreateStartsAtInitialPath) {
    auto inst = AgentInstance::create("id", compile(kSpec));
    EXPECT_EQ(inst.current_path, (std::vector<std::string>{"O", "I"}));
    EXPECT_EQ(inst.status, Status::created);
    EXPECT_EQ(inst.storage.get("seed"), "1");
    EXPECT_TRUE(inst.log("I").empty());
}

TEST(Instance, ResetRestoresInitialConfiguration) {
    auto inst = AgentInstance::create("id", compile(kSpec));
    inst.current_path = {"Z"};
    inst.logs["Z"].push_back({Role::user, "x", "Z", 1});
    inst.storage.set("seed", "changed");
    inst.storage.set("extra", "y");
    inst.status = Status::ended;
    inst.last_active_child["O"] = "J";
    inst.next_seq = 9;
    inst.reset();
    EXPECT_TRUE(statechat::testing::same_state(inst, AgentInstance::create("id", compile(kSpec))));
}

TEST(InstanceProperty, JsonRoundTrip) {
    auto machine = compile(kSpec);
    std::mt19937 rng(11);
    const std::vector<std::string> states = {"I", "J", "Z"};
    std::uniform_int_distribution<std::size_t> pick(0, states.size() - 1);
    std::uniform_int_distribution<int> count(0, 12);
    std::bernoulli_distribution coin(0.5);
    for (int round = 0; round < 100; ++round) {
        auto inst = AgentInstance::create("id", machine);
        const int n = count(rng);
        for (int i = 0; i < n; ++i) {
            const auto& s = states[pick(rng)];
            inst.logs[s].push_back({coin(rng) ? Role::agent : Role::user, "text \"" + std::to_string(i) + "\"\n", s, inst.next_seq++});
        }
        if (coin(rng)) inst.current_path = {"Z"};
        if (coin(rng)) inst.last_active_child["O"] = "J";
        inst.storage.set("k" + std::to_string(round), "{\"v\": " + std::to_string(round) + "}");
        inst.status = coin(rng) ? Status::active : Status::ended;
        auto text = instance_state_to_json(inst).dump();
        auto back = instance_from_json(nlohmann::json::parse(text), "id", machine);
        ASSERT_TRUE(statechat::testing::same_state(inst, back));
        ASSERT_EQ(conversation(inst), conversation(back));
    }
}

TEST(Instance, FromJsonRejectsUnknownStates) {
    auto machine = compile(kSpec);
    auto j = instance_state_to_json(AgentInstance::create("id", machine));
    j["current_path"] = {"Ghost"};
    EXPECT_THROW(instance_from_json(j, "id", machine), UnresolvedTarget);
    j["current_path"] = nlohmann::json::array();
    EXPECT_THROW(instance_from_json(j, "id", machine), Error);
}

TEST(Instance, StatusStrings) {
    for (auto s : {Status::created, Status::active, Status::ended}) EXPECT_EQ(status_from_string(to_string(s)), s);
    EXPECT_THROW(status_from_string("paused"), std::invalid_argument);
}
