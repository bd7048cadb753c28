#pragma once

#include <cstddef>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "statechat/lm_backend.hpp"

namespace statechat {

// One canned reply.
//  - exact_system:   system part equals `pattern`
//  - substring:      `pattern` occurs in the flattened request (see flatten_request)
//  - sequence_index: the request is the `index`-th one served (0-based)
// `uses` bounds how many requests the entry may answer; unset is unlimited.
struct ScriptEntry {
    enum class Matcher { exact_system, substring, sequence_index };

    Matcher matcher = Matcher::substring;
    std::string pattern;
    std::size_t index = 0;
    std::string reply;
    std::optional<std::size_t> uses;

    static ScriptEntry substring(std::string pattern, std::string reply,
                                 std::optional<std::size_t> uses = std::nullopt);
    static ScriptEntry exact_system(std::string system, std::string reply);
    static ScriptEntry at_index(std::size_t index, std::string reply);
};

void to_json(nlohmann::json& j, const ScriptEntry& e);
void from_json(const nlohmann::json& j, ScriptEntry& e);

std::vector<ScriptEntry> load_script(const std::filesystem::path& path);

// System part, then one "\n<role>: <content>" line per turn.
std::string flatten_request(const LmRequest& request);

// Deterministic LM stand-in. Entries are scanned in order and the first
// live match answers; a request nothing matches throws ScriptMiss.
class ScriptedBackend final : public LmBackend {
public:
    struct Served {
        LmRequest request;
        std::size_t entry = 0;
    };

    explicit ScriptedBackend(std::vector<ScriptEntry> script = {});

    std::string complete(const LmRequest& request) override;

    std::size_t requests_served() const;
    std::size_t hits(std::size_t entry) const;
    std::vector<Served> history() const;

    // Forget served requests and restore every entry's use budget.
    void rewind();

private:
    mutable std::mutex mutex_;
    std::vector<ScriptEntry> script_;
    std::vector<std::size_t> hits_;
    std::vector<Served> served_;
};

} // namespace statechat
