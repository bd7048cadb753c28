#include "statechat/states_library.hpp"

#include "statechat/library_prompts.hpp"

namespace statechat {

namespace {

// Substitutes every `marker` in a library prompt with `replacement`.
std::string fill_marker(std::string text, std::string_view marker, std::string_view replacement) {
    for (auto at = text.find(marker); at != std::string::npos; at = text.find(marker, at + replacement.size()))
        text.replace(at, marker.size(), replacement);
    return text;
}

std::string placeholder(const std::string& key, std::string_view filter = {}) {
    std::string p = "{" + key;
    if (!filter.empty()) p.append("|").append(filter);
    return p + "}";
}

} // namespace

StateNode make_single_choice_state(const SingleChoiceParams& params) {
    namespace lp = library_prompts;
    const std::string options = placeholder(params.options_key, "bullets");
    auto with_options = [&](const char* text) { return fill_marker(text, "@OPTIONS@", options); };

    StateNode state;
    state.name = params.name;
    state.state_prompt = with_options(lp::kSingleChoiceState);
    state.starter_prompt = PromptTemplate(lp::kSingleChoiceStarter);
    state.flags.starts_conversation = true;

    Transition chosen;
    chosen.decisions = {Decision::dynamic_prompt(with_options(lp::kSingleChoiceTrigger)),
                        Decision::dynamic_prompt(with_options(lp::kSingleChoiceGuard))};
    chosen.actions = {Action::dynamic_extraction(with_options(lp::kSingleChoiceExtraction), params.chosen_key)};
    chosen.target = params.next;
    state.transitions.push_back(std::move(chosen));
    return state;
}

StateNode make_activity_gap_inquiry_state(const ActivityGapInquiryParams& params) {
    namespace lp = library_prompts;
    const std::string missed = placeholder(params.missed_key);
    auto with_missed = [&](const char* text) { return fill_marker(text, "@MISSED@", missed); };

    StateNode state;
    state.name = params.name;
    state.state_prompt = with_missed(lp::kActivityGapState);
    state.starter_prompt = PromptTemplate(with_missed(lp::kActivityGapStarter));
    state.flags.starts_conversation = true;

    Transition reason_given;
    reason_given.decisions = {Decision::dynamic_prompt(with_missed(lp::kActivityGapTrigger)),
                              Decision::dynamic_prompt(with_missed(lp::kActivityGapGuard))};
    reason_given.actions = {Action::dynamic_extraction(with_missed(lp::kActivityGapExtraction), params.reason_key)};
    reason_given.target = params.next;
    state.transitions.push_back(std::move(reason_given));
    return state;
}

} // namespace statechat
