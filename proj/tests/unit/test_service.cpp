#include <chrono>
#include <filesystem>
#include <future>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>

#include "scenario.hpp"
#include "statechat/errors.hpp"
#include "statechat/service.hpp"
#include "statechat/uuid.hpp"

using namespace statechat;
using statechat::testing::Scenario;
using nlohmann::json;

namespace {

class ServiceTest : public ::testing::Test {
protected:
    ServiceTest() : scenario_(Scenario::load("daily_checkin")), lm_(scenario_.script) {}

    Service& service(ServiceConfig config = {}) {
        if (!service_) service_ = std::make_unique<Service>(repo_, lm_, registry_, config);
        return *service_;
    }
    std::string create() {
        auto r = service().create(scenario_.spec.dump());
        EXPECT_EQ(r.status, 201);
        return r.body["uuid"];
    }
    static std::string say(const std::string& text) { return json{{"content", text}}.dump(); }

    Scenario scenario_;
    ScriptedBackend lm_;
    Registry registry_ = builtin_registry();
    std::shared_ptr<InstanceRepository> repo_ = std::make_shared<MemoryRepository>();
    std::unique_ptr<Service> service_;
};

} // namespace

TEST_F(ServiceTest, CreateListInfoDelete) {
    const std::string id = create();
    EXPECT_TRUE(looks_like_uuid(id));
    auto all = service().all();
    ASSERT_EQ(all.body.size(), 1u);
    EXPECT_EQ(all.body[0]["uuid"], id);
    EXPECT_EQ(all.body[0]["name"], "daily-checkin");
    auto info = service().info(id);
    EXPECT_EQ(info.status, 200);
    EXPECT_EQ(info.body, (json{{"name", "daily-checkin"}, {"description", scenario_.spec["description"]}, {"active", false}}));
    EXPECT_EQ(service().remove(json{{"uuid", id}}.dump()).status, 200);
    EXPECT_EQ(service().info(id).status, 404);
    EXPECT_EQ(service().remove(json{{"uuid", id}}.dump()).status, 404);
    EXPECT_EQ(service().remove("{}").status, 400);
}

TEST_F(ServiceTest, CreateRejectsInvalidSpecWithPaths) {
    auto bad = read_json_file(statechat::testing::data_dir() / "invalid_specs" / "dangling_target.json");
    auto r = service().create(bad.dump());
    EXPECT_EQ(r.status, 400);
    ASSERT_FALSE(r.body["diagnostics"].empty());
    EXPECT_EQ(r.body["diagnostics"][0]["path"], "$.root.states[0].transitions[0].target");
    EXPECT_EQ(service().create("{not json").status, 400);
    EXPECT_TRUE(service().all().body.empty());
}

TEST_F(ServiceTest, UniqueNamesConflict) {
    service({.unique_names = true});
    create();
    EXPECT_EQ(service().create(scenario_.spec.dump()).status, 409);
}

TEST_F(ServiceTest, DuplicateNamesAllowedByDefault) {
    create();
    EXPECT_EQ(service().create(scenario_.spec.dump()).status, 201);
}

TEST_F(ServiceTest, RespondRunsTheConversation) {
    const std::string id = create();
    auto first = service().respond(id, say(scenario_.inputs[0]));
    ASSERT_EQ(first.status, 200) << first.body.dump();
    EXPECT_EQ(first.body["content"], "That's great progress. Tell me more about your swimming.");
    EXPECT_TRUE(service().info(id).body["active"]);
    auto second = service().respond(id, say(scenario_.inputs[1]));
    ASSERT_EQ(second.status, 200);
    EXPECT_FALSE(service().info(id).body["active"]);
    EXPECT_EQ(service().respond(id, say("more")).status, 422);

    auto convo = service().conversation(id);
    EXPECT_EQ(convo.body.size(), 5u);
    EXPECT_EQ(convo.body[0]["content"], "Hi Daniel. How are you feeling after your swim and fasting period?");
    auto summary = service().get_storage(id, "summary");
    EXPECT_EQ(summary.status, 200);
    EXPECT_EQ(json::parse(summary.body["value"].get<std::string>())["adherence"],
              "Partial; fasted successfully, missed swimming.");
}

TEST_F(ServiceTest, RespondValidation) {
    const std::string id = create();
    EXPECT_EQ(service().respond(id, "{}").status, 400);
    EXPECT_EQ(service().respond(id, R"({"content": 3})").status, 400);
    EXPECT_EQ(service().respond(make_uuid(), say("x")).status, 404);
    EXPECT_EQ(service().conversation(make_uuid()).status, 404);
    EXPECT_EQ(service().reset(make_uuid()).status, 404);
}

TEST_F(ServiceTest, LmFailureIs502AndChangesNothing) {
    const std::string id = create();
    ScriptedBackend silent;
    Service other(repo_, silent, registry_);
    auto r = other.respond(id, say("hello"));
    EXPECT_EQ(r.status, 502);
    EXPECT_TRUE(other.conversation(id).body.empty());
    EXPECT_FALSE(other.info(id).body["active"]);
}

TEST_F(ServiceTest, ResetRestoresSeedStorage) {
    const std::string id = create();
    service().respond(id, say(scenario_.inputs[0]));
    service().respond(id, say(scenario_.inputs[1]));
    ASSERT_EQ(service().put_storage(id, "extra", R"({"value": {"n": 1}})").status, 200);
    EXPECT_EQ(service().get_storage(id, "extra").body["value"], R"({"n":1})");
    ASSERT_EQ(service().reset(id).status, 200);
    EXPECT_TRUE(service().conversation(id).body.empty());
    EXPECT_FALSE(service().info(id).body["active"]);
    EXPECT_EQ(service().get_storage(id, "summary").status, 404);
    EXPECT_EQ(service().get_storage(id, "extra").status, 404);
    EXPECT_EQ(service().get_storage(id, "patient").body["value"], "Daniel");
}

TEST_F(ServiceTest, StorageWritesAreVisibleToPrompts) {
    const std::string id = create();
    ASSERT_EQ(service().put_storage(id, "patient", R"({"value": "Robin"})").status, 200);
    service().respond(id, say("hi"));
    EXPECT_NE(lm_.history()[0].request.system_part.find("The patient is Robin."), std::string::npos);
    EXPECT_EQ(service().put_storage(id, "k", R"({"nope": 1})").status, 400);
}

namespace {

// Blocks every completion until released.
class GateBackend final : public LmBackend {
public:
    std::string complete(const LmRequest&) override {
        entered_.set_value();
        release_.get_future().wait();
        return "reply";
    }
    std::future<void> entered() { return entered_.get_future(); }
    void release() { release_.set_value(); }

private:
    std::promise<void> entered_;
    std::promise<void> release_;
};

} // namespace

TEST(ServiceConcurrency, SecondRequestOnSameUuidGets409) {
    GateBackend gate;
    Registry registry = builtin_registry();
    Service service(std::make_shared<MemoryRepository>(), gate, registry);
    auto created = service.create(R"({"name": "n", "root": {"initial": "A", "states": [{"name": "A", "prompt": "p"}]}})");
    const std::string id = created.body["uuid"];
    auto other = service.create(R"({"name": "m", "root": {"initial": "A", "states": [{"name": "A", "prompt": "p"}]}})");

    auto entered = gate.entered();
    auto first = std::async(std::launch::async, [&] { return service.respond(id, R"({"content": "one"})"); });
    entered.wait();
    EXPECT_EQ(service.respond(id, R"({"content": "two"})").status, 409);
    EXPECT_EQ(service.reset(id).status, 409);
    EXPECT_EQ(service.info(id).status, 200);
    EXPECT_EQ(service.info(other.body["uuid"]).status, 200);
    gate.release();
    EXPECT_EQ(first.get().status, 200);
}

TEST(ServiceHttp, EndpointsOverTheWire) {
    auto scenario = Scenario::load("daily_checkin");
    ScriptedBackend lm(scenario.script);
    Registry registry = builtin_registry();
    Service service(std::make_shared<MemoryRepository>(), lm, registry, {.host = "127.0.0.1", .port = 0});
    const int port = service.bind();
    ASSERT_GT(port, 0);
    std::thread server([&] { service.serve(); });

    httplib::Client client("127.0.0.1", port);
    auto created = client.Post("/create", scenario.spec.dump(), "application/json");
    ASSERT_TRUE(created);
    EXPECT_EQ(created->status, 201);
    const std::string id = json::parse(created->body)["uuid"];

    auto all = client.Get("/all");
    EXPECT_EQ(json::parse(all->body).size(), 1u);
    EXPECT_EQ(client.Get("/" + id + "/info")->status, 200);
    auto reply = client.Post("/" + id + "/respond", json{{"content", scenario.inputs[0]}}.dump(), "application/json");
    EXPECT_EQ(reply->status, 200);
    EXPECT_EQ(json::parse(reply->body)["utterances"].size(), 1u);
    EXPECT_EQ(json::parse(client.Get("/" + id + "/conversation")->body).size(), 3u);
    EXPECT_EQ(client.Put("/" + id + "/storage/mood", R"({"value": "good"})", "application/json")->status, 200);
    EXPECT_EQ(json::parse(client.Get("/" + id + "/storage/mood")->body)["value"], "good");
    EXPECT_EQ(client.Put("/" + id + "/reset", "", "application/json")->status, 200);
    EXPECT_EQ(json::parse(client.Get("/" + id + "/conversation")->body).size(), 0u);
    EXPECT_EQ(client.Get("/" + make_uuid() + "/info")->status, 404);
    EXPECT_EQ(client.Get("/nope")->status, 404);
    EXPECT_EQ(client.Delete("/delete", json{{"uuid", id}}.dump(), "application/json")->status, 200);

    service.stop();
    server.join();
}

TEST(AppConfig, FileThenEnvironment) {
    auto path = std::filesystem::temp_directory_path() / ("statechat-config-" + make_uuid() + ".json");
    {
        std::ofstream out(path);
        out << R"({"host": "0.0.0.0", "port": 9000, "store": "a.db", "backend": "http", "lm_model": "m", "unique_names": true})";
    }
    auto cfg = load_app_config(path);
    EXPECT_EQ(cfg.service.host, "0.0.0.0");
    EXPECT_EQ(cfg.service.port, 9000);
    EXPECT_TRUE(cfg.service.unique_names);
    EXPECT_EQ(cfg.store, "a.db");
    EXPECT_EQ(cfg.backend, "http");
    EXPECT_EQ(cfg.lm_model, "m");

    ::setenv("STATECHAT_PORT", "9100", 1);
    ::setenv("STATECHAT_LM_BACKEND", "scripted", 1);
    ::setenv("PROMISE_LM_API_KEY", "k", 1);
    cfg = load_app_config(path);
    EXPECT_EQ(cfg.service.port, 9100);
    EXPECT_EQ(cfg.backend, "scripted");
    EXPECT_EQ(cfg.lm_api_key, "k");
    ::setenv("STATECHAT_LM_BACKEND", "carrier-pigeon", 1);
    EXPECT_THROW(load_app_config(std::nullopt), Error);
    ::unsetenv("STATECHAT_PORT");
    ::unsetenv("STATECHAT_LM_BACKEND");
    ::unsetenv("PROMISE_LM_API_KEY");
    std::filesystem::remove(path);
    EXPECT_THROW(load_app_config(path), Error);
}
