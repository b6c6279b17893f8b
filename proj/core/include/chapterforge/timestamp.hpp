#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace chapterforge {

// Whole seconds from video start. The fixed-width HH:MM:SS codec covers
// 00:00:00 through 99:59:59; fractional inputs are floored on ingestion.
struct Timestamp {
    std::uint32_t seconds = 0;

    auto operator<=>(const Timestamp&) const = default;
};

inline constexpr std::uint32_t kMaxTimestampSeconds = 99u * 3600 + 59u * 60 + 59;  // 99:59:59

// Zero-padded HH:MM:SS. Throws ValidationError above 99:59:59.
std::string format_timestamp(Timestamp t);

// Strict inverse of format_timestamp: exactly two-digit fields with MM,SS < 60.
// Throws ParseError carrying the byte offset of the first offending character.
Timestamp parse_timestamp(std::string_view s);

// Non-throwing variant for scanning noisy text.
bool try_parse_timestamp(std::string_view s, Timestamp& out);

}  // namespace chapterforge
