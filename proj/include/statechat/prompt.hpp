#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "statechat/storage.hpp"
#include "statechat/utterance.hpp"

namespace statechat {

// Joins prompt fragments. Every composed system part is the fragments
// joined with this separator, in order, byte for byte.
inline constexpr std::string_view kFragmentSeparator = "\n";

// Appended to every decision prompt; decisions are read back as YES/NO.
inline constexpr std::string_view kDecisionDirective =
    "Answer with exactly one word: YES or NO.";

// Appended to the active prompt chain when a final node is reached.
inline constexpr std::string_view kClosingDirective =
    "The conversation is now over. Compose a single, short closing message to the user "
    "that acknowledges what was discussed. Do not ask any further questions.";

// A prompt with `{key}` placeholders filled from interaction storage.
//
// A placeholder is a `{`, a non-empty key without braces or whitespace,
// and a `}`. The key may carry a filter suffix `|bullets`, which renders a
// stored JSON array of strings as a "- item" list. Any other brace is
// literal text, so JSON fragments inside prompts survive rendering.
struct PromptTemplate {
    std::string text;

    PromptTemplate() = default;
    PromptTemplate(std::string t) : text(std::move(t)) {}  // NOLINT: implicit by intent
    PromptTemplate(const char* t) : text(t) {}             // NOLINT

    friend bool operator==(const PromptTemplate&, const PromptTemplate&) = default;
};

struct Placeholder {
    std::size_t begin = 0;   // offset of '{'
    std::size_t end = 0;     // one past '}'
    std::string key;
    std::string filter;      // empty when absent
};

// Placeholders of `text` in left-to-right order.
std::vector<Placeholder> find_placeholders(std::string_view text);

// Single pass, left to right. Substituted values are never rescanned.
std::string render_template(const PromptTemplate& tmpl, const InteractionStorage& storage);

// What the LM receives: instruction fragments plus the structured turns.
struct ComposedPrompt {
    std::string system_part;
    Utterances conversation;

    friend bool operator==(const ComposedPrompt&, const ComposedPrompt&) = default;
};

std::string join_fragments(std::span<const std::string> fragments);

// State prompt chain + starter prompt; used when the system opens.
ComposedPrompt compose_starter(std::span<const std::string> state_prompt_chain,
                               std::string_view starter_prompt);

// State prompt chain + the utterances collected in the state.
ComposedPrompt compose_response(std::span<const std::string> state_prompt_chain,
                                const Utterances& utterances);

// Trigger or guard prompt + the decision directive + the utterances.
ComposedPrompt compose_decision(std::string_view decision_prompt, const Utterances& utterances);

ComposedPrompt compose_action(std::string_view action_prompt, const Utterances& utterances);

// State prompt chain + the closing directive + the utterances.
ComposedPrompt compose_closing(std::span<const std::string> state_prompt_chain,
                               const Utterances& utterances);

} // namespace statechat
