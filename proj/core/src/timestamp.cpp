#include "chapterforge/timestamp.hpp"

#include <cstdio>

#include "chapterforge/errors.hpp"

namespace chapterforge {

std::string format_timestamp(Timestamp t) {
    if (t.seconds > kMaxTimestampSeconds) {
        throw ValidationError("timestamp " + std::to_string(t.seconds) +
                              "s exceeds the HH:MM:SS range (max 99:59:59 = " +
                              std::to_string(kMaxTimestampSeconds) + "s)");
    }
    const unsigned h = t.seconds / 3600;
    const unsigned m = (t.seconds / 60) % 60;
    const unsigned s = t.seconds % 60;
    char buf[9];
    std::snprintf(buf, sizeof(buf), "%02u:%02u:%02u", h, m, s);
    return std::string(buf, 8);
}

namespace {

bool is_digit(char c) {
    return c >= '0' && c <= '9';
}

// Returns the byte offset of the first offending character, or npos if valid.
std::size_t first_defect(std::string_view s) {
    if (s.size() != 8) {
        return s.size() < 8 ? s.size() : 8;
    }
    for (std::size_t i : {std::size_t{2}, std::size_t{5}}) {
        if (s[i] != ':') {
            return i;
        }
    }
    for (std::size_t i : {std::size_t{0}, std::size_t{1}, std::size_t{3}, std::size_t{4},
                          std::size_t{6}, std::size_t{7}}) {
        if (!is_digit(s[i])) {
            return i;
        }
    }
    if (s[3] > '5') {
        return 3;  // minutes >= 60
    }
    if (s[6] > '5') {
        return 6;  // seconds >= 60
    }
    return std::string_view::npos;
}

std::uint32_t two_digits(std::string_view s, std::size_t pos) {
    return static_cast<std::uint32_t>(s[pos] - '0') * 10 +
           static_cast<std::uint32_t>(s[pos + 1] - '0');
}

}  // namespace

bool try_parse_timestamp(std::string_view s, Timestamp& out) {
    if (first_defect(s) != std::string_view::npos) {
        return false;
    }
    out.seconds = two_digits(s, 0) * 3600 + two_digits(s, 3) * 60 + two_digits(s, 6);
    return true;
}

Timestamp parse_timestamp(std::string_view s) {
    const std::size_t defect = first_defect(s);
    if (defect != std::string_view::npos) {
        throw ParseError("invalid timestamp '" + std::string(s) +
                             "': expected HH:MM:SS with MM,SS < 60 (error at byte " +
                             std::to_string(defect) + ")",
                         defect);
    }
    Timestamp t;
    try_parse_timestamp(s, t);
    return t;
}

}  // namespace chapterforge
