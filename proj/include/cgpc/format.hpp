#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace cgpc {

// Locale-independent number formatting; all file output goes through these.

// Shortest representation that round-trips the exact double.
inline std::string format_double(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, ptr);
}

inline std::string format_fixed(double value, int precision) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed,
                                   precision);
    (void)ec;
    return std::string(buf, ptr);
}

// "92.73" style: a fraction rendered as a percentage with two decimals.
inline std::string format_percent(double fraction) {
    return format_fixed(fraction * 100.0, 2);
}

inline double parse_double(const std::string& text) {
    double value = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), value);
    return value;
}

} // namespace cgpc
