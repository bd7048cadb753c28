#pragma once

#include <string>

#include "statechat/machine.hpp"

namespace statechat {

struct SingleChoiceParams {
    std::string name;
    Target next;
    std::string options_key;  // JSON array of strings, read when the state runs
    std::string chosen_key;
};

struct ActivityGapInquiryParams {
    std::string name;
    Target next;
    std::string missed_key;
    std::string reason_key;
};

// Presents the options stored under `options_key` and stores the one the
// user picks under `chosen_key`.
StateNode make_single_choice_state(const SingleChoiceParams& params);

// Asks why the activity stored under `missed_key` was missed and stores
// the reason under `reason_key`.
StateNode make_activity_gap_inquiry_state(const ActivityGapInquiryParams& params);

} // namespace statechat
