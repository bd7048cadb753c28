#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "statechat/scripted_backend.hpp"
#include "statechat/session.hpp"
#include "statechat/spec_loader.hpp"

namespace statechat::testing {

inline std::filesystem::path scenario_dir(const std::string& name) {
    return std::filesystem::path(STATECHAT_SCENARIO_DIR) / name;
}

inline std::filesystem::path data_dir() { return STATECHAT_TEST_DATA_DIR; }

std::string read_text(const std::filesystem::path& path);

// Files of one directory under scenarios/.
struct Scenario {
    nlohmann::json spec;
    std::vector<ScriptEntry> script;
    std::vector<std::string> inputs;
    std::string expected;  // run --dump-storage output

    static Scenario load(const std::string& name);

    // Transcript lines of `expected`, without the trailing storage line.
    std::string expected_transcript() const;
    nlohmann::json expected_storage_line() const;
};

} // namespace statechat::testing
