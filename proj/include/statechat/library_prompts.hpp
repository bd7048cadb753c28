#pragma once

// Wording of the prompts generated by the predefined states. `@OPTIONS@`
// and `@MISSED@` are replaced with the placeholder for the corresponding
// storage key when a state is built.

namespace statechat::library_prompts {

inline constexpr const char* kSingleChoiceState =
    "Present the following options to the user and help them choose exactly one of them. "
    "Do not suggest anything that is not on the list.\nOptions:\n@OPTIONS@";
inline constexpr const char* kSingleChoiceStarter =
    "Compose a single, short message that presents the options and asks the user which one "
    "they prefer.";
inline constexpr const char* kSingleChoiceTrigger =
    "Examine the conversation and decide if the user has chosen exactly one of the offered "
    "options.\nOptions:\n@OPTIONS@";
inline constexpr const char* kSingleChoiceGuard =
    "Examine the conversation and decide if the option the user chose can be extracted "
    "unambiguously as one of these options:\n@OPTIONS@";
inline constexpr const char* kSingleChoiceExtraction =
    "Extract the option the user chose from the conversation. Reply with the option text only.\n"
    "Options:\n@OPTIONS@";

inline constexpr const char* kActivityGapState =
    "Inquire why the user missed the following activity: @MISSED@. Listen with empathy and "
    "ask open questions until the user has given a reason.";
inline constexpr const char* kActivityGapStarter =
    "Compose a single, short message that mentions the user missed @MISSED@ and asks whether "
    "they would like to share the challenges they faced.";
inline constexpr const char* kActivityGapTrigger =
    "Examine the conversation and decide if the user provided a valid reason for missing "
    "@MISSED@.";
inline constexpr const char* kActivityGapGuard =
    "Examine the conversation and decide if the reason the user gave for missing @MISSED@ "
    "can be extracted as a short statement.";
inline constexpr const char* kActivityGapExtraction =
    "Extract the reason the user gave for missing @MISSED@. Reply with one short sentence.";

} // namespace statechat::library_prompts
