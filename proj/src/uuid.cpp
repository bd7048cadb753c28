#include "statechat/uuid.hpp"

#include <cctype>
#include <mutex>
#include <random>

namespace statechat {

std::string make_uuid() {
    static std::mutex mutex;
    static std::mt19937_64 rng{std::random_device{}()};

    std::uint64_t hi = 0;
    std::uint64_t lo = 0;
    {
        std::lock_guard lock(mutex);
        hi = rng();
        lo = rng();
    }
    hi = (hi & 0xFFFFFFFFFFFF0FFFULL) | 0x0000000000004000ULL;  // version 4
    lo = (lo & 0x3FFFFFFFFFFFFFFFULL) | 0x8000000000000000ULL;  // RFC 4122 variant

    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(36);
    auto put = [&](std::uint64_t v, int nibbles) {
        for (int i = nibbles - 1; i >= 0; --i) out += hex[(v >> (i * 4)) & 0xF];
    };
    put(hi >> 32, 8);
    out += '-';
    put(hi >> 16, 4);
    out += '-';
    put(hi, 4);
    out += '-';
    put(lo >> 48, 4);
    out += '-';
    put(lo, 12);
    return out;
}

bool looks_like_uuid(std::string_view text) {
    if (text.size() != 36) return false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const bool dash = i == 8 || i == 13 || i == 18 || i == 23;
        if (dash ? text[i] != '-' : !std::isxdigit(static_cast<unsigned char>(text[i]))) return false;
    }
    return true;
}

} // namespace statechat
