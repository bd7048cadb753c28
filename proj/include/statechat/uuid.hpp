#pragma once

#include <string>
#include <string_view>

namespace statechat {

// Random version-4 UUID in canonical lowercase form.
std::string make_uuid();

bool looks_like_uuid(std::string_view text);

} // namespace statechat
