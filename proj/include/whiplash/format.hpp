#pragma once

#include <charconv>
#include <cstddef>
#include <string>
#include <system_error>

namespace whiplash {

// Decimal text with 17 significant digits: round-trip exact for 64-bit
// floats, locale-independent, byte-deterministic.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline std::string format_size(std::size_t v) { return std::to_string(v); }

}  // namespace whiplash
