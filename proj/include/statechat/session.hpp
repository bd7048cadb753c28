#pragma once

#include <span>
#include <string>

#include "statechat/engine.hpp"

namespace statechat {

// Opens the conversation when the entry state is a starter, then feeds
// `inputs` one by one. Errors propagate; `instance` keeps the progress
// made before the failing call.
void run_session(Engine& engine, AgentInstance& instance, std::span<const std::string> inputs);

// One JSON object per line: {"seq","role","state","content"}.
std::string transcript_jsonl(const Utterances& utterances);

// {"status":...,"storage":{...}} on one line.
std::string storage_line(const AgentInstance& instance);

} // namespace statechat
