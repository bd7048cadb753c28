#include "statechat/prompt.hpp"

#include <cctype>

#include <nlohmann/json.hpp>

#include "statechat/errors.hpp"

namespace statechat {

namespace {

bool is_key_char(char c) {
    return c != '{' && c != '}' && !std::isspace(static_cast<unsigned char>(c));
}

std::string bullet_list(const std::string& key, const std::string& value) {
    auto parsed = nlohmann::json::parse(value, nullptr, false);
    if (!parsed.is_array()) throw InvalidPlaceholderValue(key, "is not a JSON array of strings");
    std::string out;
    for (const auto& item : parsed) {
        if (!item.is_string()) throw InvalidPlaceholderValue(key, "is not a JSON array of strings");
        if (!out.empty()) out += '\n';
        out += "- ";
        out += item.get<std::string>();
    }
    return out;
}

ComposedPrompt with_directive(std::string_view head, std::string_view directive,
                              const Utterances& utterances) {
    ComposedPrompt composed;
    composed.system_part.reserve(head.size() + kFragmentSeparator.size() + directive.size());
    composed.system_part.append(head).append(kFragmentSeparator).append(directive);
    composed.conversation = utterances;
    return composed;
}

ComposedPrompt with_tail(std::span<const std::string> chain, std::string_view tail,
                         const Utterances& utterances) {
    if (chain.empty()) return {std::string(tail), utterances};
    return with_directive(join_fragments(chain), tail, utterances);
}

} // namespace

std::vector<Placeholder> find_placeholders(std::string_view text) {
    std::vector<Placeholder> found;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '{') {
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        while (j < text.size() && is_key_char(text[j])) ++j;
        if (j < text.size() && text[j] == '}' && j > i + 1) {
            std::string_view inner = text.substr(i + 1, j - i - 1);
            auto bar = inner.find('|');
            Placeholder p{i, j + 1, std::string(inner.substr(0, bar)), {}};
            if (bar != std::string_view::npos) p.filter = std::string(inner.substr(bar + 1));
            if (!p.key.empty()) {
                found.push_back(std::move(p));
                i = j + 1;
                continue;
            }
        }
        ++i;
    }
    return found;
}

std::string render_template(const PromptTemplate& tmpl, const InteractionStorage& storage) {
    const std::string& text = tmpl.text;
    std::string out;
    out.reserve(text.size());
    std::size_t cursor = 0;
    for (const auto& p : find_placeholders(text)) {
        out.append(text, cursor, p.begin - cursor);
        const std::string* value = storage.find(p.key);
        if (!value) throw MissingPlaceholderValue(p.key);
        if (p.filter.empty()) {
            out += *value;
        } else if (p.filter == "bullets") {
            out += bullet_list(p.key, *value);
        } else {
            throw InvalidPlaceholderValue(p.key, "uses unknown filter '" + p.filter + "'");
        }
        cursor = p.end;
    }
    out.append(text, cursor, std::string::npos);
    return out;
}

std::string join_fragments(std::span<const std::string> fragments) {
    std::string out;
    for (std::size_t i = 0; i < fragments.size(); ++i) {
        if (i > 0) out.append(kFragmentSeparator);
        out += fragments[i];
    }
    return out;
}

ComposedPrompt compose_starter(std::span<const std::string> state_prompt_chain,
                               std::string_view starter_prompt) {
    return with_tail(state_prompt_chain, starter_prompt, {});
}

ComposedPrompt compose_response(std::span<const std::string> state_prompt_chain,
                                const Utterances& utterances) {
    return {join_fragments(state_prompt_chain), utterances};
}

ComposedPrompt compose_decision(std::string_view decision_prompt, const Utterances& utterances) {
    return with_directive(decision_prompt, kDecisionDirective, utterances);
}

ComposedPrompt compose_action(std::string_view action_prompt, const Utterances& utterances) {
    return {std::string(action_prompt), utterances};
}

ComposedPrompt compose_closing(std::span<const std::string> state_prompt_chain,
                               const Utterances& utterances) {
    return with_tail(state_prompt_chain, kClosingDirective, utterances);
}

} // namespace statechat
