// statechat: validate machine specs, run conversations, serve the REST API.
#include <csignal>
#include <iostream>
#include <memory>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "statechat/errors.hpp"
#include "statechat/http_backend.hpp"
#include "statechat/scripted_backend.hpp"
#include "statechat/service.hpp"
#include "statechat/session.hpp"
#include "statechat/spec_loader.hpp"

using namespace statechat;

namespace {

struct RunOptions {
    std::string spec;
    std::string script;
    std::string inputs;
    bool interactive = false;
    std::string backend = "scripted";
    std::string base_url = "http://127.0.0.1:8081";
    std::string model;
    bool dump_storage = false;
};

int validate(const std::string& spec_path) {
    const Registry registry = builtin_registry();
    std::vector<Diagnostic> diagnostics;
    try {
        diagnostics = load_machine_spec(read_json_file(spec_path), registry).diagnostics;
    } catch (const SpecError& e) {
        diagnostics = e.diagnostics();
    }
    for (const auto& d : diagnostics) std::cout << spec_path << ": " << d.path << ": " << d.message << "\n";
    if (diagnostics.empty()) std::cout << spec_path << ": ok\n";
    return diagnostics.empty() ? 0 : 1;
}

std::unique_ptr<LmBackend> make_backend(const RunOptions& opt) {
    if (opt.backend == "http") {
        HttpBackendConfig cfg;
        cfg.base_url = opt.base_url;
        cfg.model = opt.model;
        return std::make_unique<HttpBackend>(with_env_api_key(cfg));
    }
    if (opt.script.empty()) throw Error("--script is required with the scripted backend");
    return std::make_unique<ScriptedBackend>(load_script(opt.script));
}

void interact(Engine& engine, AgentInstance& instance) {
    auto show = [](const Utterance& u) { std::cout << "[" << u.state << "] " << u.content << "\n"; };
    if (instance.machine->state(instance.active_state()).flags.starts_conversation) show(engine.start(instance));
    std::string line;
    while (instance.status != Status::ended && (std::cout << "> " << std::flush, std::getline(std::cin, line))) {
        if (line.empty()) continue;
        for (const auto& u : engine.respond(instance, line)) show(u);
    }
}

int run(const RunOptions& opt) {
    const Registry registry = builtin_registry();
    auto machine = compile_machine_spec(read_json_file(opt.spec), registry);
    auto backend = make_backend(opt);
    Engine engine(*backend, registry);
    AgentInstance instance = AgentInstance::create("cli", machine);

    std::vector<std::string> inputs;
    if (!opt.inputs.empty()) inputs = read_json_file(opt.inputs).get<std::vector<std::string>>();

    int code = 0;
    try {
        if (opt.interactive)
            interact(engine, instance);
        else
            run_session(engine, instance, inputs);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        code = 2;
    }
    if (!opt.interactive) std::cout << transcript_jsonl(conversation(instance));
    if (opt.dump_storage) std::cout << storage_line(instance);
    return code;
}

Service* running = nullptr;

int serve(const std::string& config_path) {
    spdlog::set_default_logger(spdlog::stderr_color_mt("statechat"));
    AppConfig cfg = load_app_config(config_path.empty() ? std::nullopt : std::optional<std::filesystem::path>(config_path));
    const Registry registry = builtin_registry();

    std::unique_ptr<LmBackend> backend;
    if (cfg.backend == "http") {
        HttpBackendConfig http;
        http.base_url = cfg.lm_base_url;
        http.model = cfg.lm_model;
        http.api_key = cfg.lm_api_key;
        http.max_in_flight = cfg.lm_max_in_flight;
        backend = std::make_unique<HttpBackend>(http);
    } else {
        if (cfg.script.empty()) throw Error("the scripted backend needs a script (STATECHAT_LM_SCRIPT)");
        backend = std::make_unique<ScriptedBackend>(load_script(cfg.script));
    }

    Service service(std::make_shared<SqliteRepository>(cfg.store), *backend, registry, cfg.service);
    const int port = service.bind();
    if (port < 0) {
        spdlog::error("cannot bind {}:{}", cfg.service.host, cfg.service.port);
        return 1;
    }
    spdlog::info("listening on {}:{} store={} backend={}", cfg.service.host, port, cfg.store.string(), cfg.backend);
    std::cout << "port " << port << std::endl;

    running = &service;
    std::signal(SIGINT, [](int) { running->stop(); });
    std::signal(SIGTERM, [](int) { running->stop(); });
    service.serve();
    running = nullptr;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hierarchical state-machine conversations driven by a language model"};
    app.require_subcommand(1);

    std::string validate_spec;
    auto* validate_cmd = app.add_subcommand("validate", "Check a machine spec and print its diagnostics");
    validate_cmd->add_option("--spec", validate_spec, "Machine spec JSON")->required()->check(CLI::ExistingFile);

    RunOptions opt;
    auto* run_cmd = app.add_subcommand("run", "Run a conversation and print its transcript as JSON lines");
    run_cmd->add_option("--spec", opt.spec, "Machine spec JSON")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--script", opt.script, "Scripted backend replies")->check(CLI::ExistingFile);
    auto* inputs = run_cmd->add_option("--inputs", opt.inputs, "JSON array of user inputs")->check(CLI::ExistingFile);
    run_cmd->add_flag("--interactive", opt.interactive, "Read user inputs from the terminal")->excludes(inputs);
    run_cmd->add_option("--backend", opt.backend, "scripted or http")
        ->check(CLI::IsMember({"scripted", "http"}));
    run_cmd->add_option("--base-url", opt.base_url, "Chat-completions base URL for the http backend");
    run_cmd->add_option("--model", opt.model, "Model name for the http backend");
    run_cmd->add_flag("--dump-storage", opt.dump_storage, "Print status and storage after the transcript");

    std::string config_path;
    auto* serve_cmd = app.add_subcommand("serve", "Run the REST service");
    serve_cmd->add_option("--config", config_path, "Service config JSON")->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate_cmd) return validate(validate_spec);
        if (*run_cmd) return run(opt);
        if (*serve_cmd) return serve(config_path);
    } catch (const SpecError& e) {
        for (const auto& d : e.diagnostics()) std::cerr << d.path << ": " << d.message << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
