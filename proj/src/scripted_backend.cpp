#include "statechat/scripted_backend.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "statechat/errors.hpp"

namespace statechat {

ScriptEntry ScriptEntry::substring(std::string pattern, std::string reply, std::optional<std::size_t> uses) {
    ScriptEntry e;
    e.matcher = Matcher::substring;
    e.pattern = std::move(pattern);
    e.reply = std::move(reply);
    e.uses = uses;
    return e;
}

ScriptEntry ScriptEntry::exact_system(std::string system, std::string reply) {
    ScriptEntry e;
    e.matcher = Matcher::exact_system;
    e.pattern = std::move(system);
    e.reply = std::move(reply);
    return e;
}

ScriptEntry ScriptEntry::at_index(std::size_t index, std::string reply) {
    ScriptEntry e;
    e.matcher = Matcher::sequence_index;
    e.index = index;
    e.reply = std::move(reply);
    return e;
}

void to_json(nlohmann::json& j, const ScriptEntry& e) {
    switch (e.matcher) {
    case ScriptEntry::Matcher::exact_system: j = {{"matcher", "exact_system"}, {"pattern", e.pattern}}; break;
    case ScriptEntry::Matcher::substring: j = {{"matcher", "substring"}, {"pattern", e.pattern}}; break;
    case ScriptEntry::Matcher::sequence_index: j = {{"matcher", "sequence_index"}, {"pattern", e.index}}; break;
    }
    j["reply"] = e.reply;
    if (e.uses) j["uses"] = *e.uses;
}

void from_json(const nlohmann::json& j, ScriptEntry& e) {
    const auto matcher = j.at("matcher").get<std::string>();
    if (matcher == "exact_system") {
        e.matcher = ScriptEntry::Matcher::exact_system;
        e.pattern = j.at("pattern").get<std::string>();
    } else if (matcher == "substring") {
        e.matcher = ScriptEntry::Matcher::substring;
        e.pattern = j.at("pattern").get<std::string>();
    } else if (matcher == "sequence_index") {
        e.matcher = ScriptEntry::Matcher::sequence_index;
        e.index = j.at("pattern").get<std::size_t>();
    } else {
        throw std::invalid_argument("unknown script matcher '" + matcher + "'");
    }
    e.reply = j.at("reply").get<std::string>();
    if (j.contains("uses")) e.uses = j.at("uses").get<std::size_t>();
    else e.uses.reset();
}

std::vector<ScriptEntry> load_script(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open script file " + path.string());
    try {
        return nlohmann::json::parse(in).get<std::vector<ScriptEntry>>();
    } catch (const std::exception& e) {
        throw Error("invalid script file " + path.string() + ": " + e.what());
    }
}

std::string flatten_request(const LmRequest& request) {
    std::string out = request.system_part;
    for (const auto& turn : request.turns) {
        out += '\n';
        out += to_string(turn.role);
        out += ": ";
        out += turn.content;
    }
    return out;
}

ScriptedBackend::ScriptedBackend(std::vector<ScriptEntry> script)
    : script_(std::move(script)), hits_(script_.size(), 0) {}

std::string ScriptedBackend::complete(const LmRequest& request) {
    std::lock_guard lock(mutex_);
    const std::size_t sequence = served_.size();
    std::string flat;
    for (std::size_t i = 0; i < script_.size(); ++i) {
        const auto& entry = script_[i];
        if (entry.uses && hits_[i] >= *entry.uses) continue;

        bool match = false;
        switch (entry.matcher) {
        case ScriptEntry::Matcher::exact_system: match = request.system_part == entry.pattern; break;
        case ScriptEntry::Matcher::sequence_index: match = sequence == entry.index; break;
        case ScriptEntry::Matcher::substring:
            if (flat.empty()) flat = flatten_request(request);
            match = flat.find(entry.pattern) != std::string::npos;
            break;
        }
        if (match) {
            ++hits_[i];
            served_.push_back({request, i});
            return entry.reply;
        }
    }
    throw ScriptMiss("no script entry matches request #" + std::to_string(sequence) + ": " +
                     request.system_part.substr(0, 120));
}

std::size_t ScriptedBackend::requests_served() const {
    std::lock_guard lock(mutex_);
    return served_.size();
}

std::size_t ScriptedBackend::hits(std::size_t entry) const {
    std::lock_guard lock(mutex_);
    return entry < hits_.size() ? hits_[entry] : 0;
}

std::vector<ScriptedBackend::Served> ScriptedBackend::history() const {
    std::lock_guard lock(mutex_);
    return served_;
}

void ScriptedBackend::rewind() {
    std::lock_guard lock(mutex_);
    served_.clear();
    std::fill(hits_.begin(), hits_.end(), 0);
}

} // namespace statechat
