#include <doctest.h>

#include "chapterforge/errors.hpp"
#include "chapterforge/timestamp.hpp"

using namespace chapterforge;

TEST_CASE("format_timestamp renders zero-padded HH:MM:SS") {
    CHECK(format_timestamp(Timestamp{0}) == "00:00:00");
    CHECK(format_timestamp(Timestamp{592}) == "00:09:52");
    CHECK(format_timestamp(Timestamp{51}) == "00:00:51");
    CHECK(format_timestamp(Timestamp{3601}) == "01:00:01");
    CHECK(format_timestamp(Timestamp{kMaxTimestampSeconds}) == "99:59:59");
}

TEST_CASE("format_timestamp rejects out-of-range values") {
    CHECK_THROWS_AS(format_timestamp(Timestamp{kMaxTimestampSeconds + 1}), ValidationError);
}

TEST_CASE("parse_timestamp inverts formatting") {
    CHECK(parse_timestamp("00:09:52").seconds == 592);
    CHECK(parse_timestamp("00:00:00").seconds == 0);
    CHECK(parse_timestamp("01:00:01").seconds == 3601);
    CHECK(parse_timestamp("99:59:59").seconds == kMaxTimestampSeconds);
}

TEST_CASE("parse_timestamp reports the offending byte") {
    const auto offset_of = [](std::string_view s) {
        try {
            parse_timestamp(s);
        } catch (const ParseError& e) {
            REQUIRE(e.byte_offset.has_value());
            return *e.byte_offset;
        }
        FAIL("expected a parse error for '", s, "'");
        return std::size_t{0};
    };
    CHECK(offset_of("00:60:00") == 3);   // minutes out of range
    CHECK(offset_of("00:00:61") == 6);   // seconds out of range
    CHECK(offset_of("0:00:00") == 7);    // too short
    CHECK(offset_of("00:00:000") == 8);  // too long
    CHECK(offset_of("00-00-00") == 2);   // wrong separator
    CHECK(offset_of("aa:00:00") == 0);   // non-digit
    CHECK(offset_of("") == 0);
}

TEST_CASE("round trip holds for every representable second") {
    for (std::uint32_t s = 0; s <= kMaxTimestampSeconds; ++s) {
        const Timestamp t{s};
        if (parse_timestamp(format_timestamp(t)) != t) {
            REQUIRE(parse_timestamp(format_timestamp(t)) == t);  // report the first failure
        }
    }
    CHECK(true);
}

TEST_CASE("try_parse_timestamp rejects without throwing") {
    Timestamp t;
    CHECK_FALSE(try_parse_timestamp("garbage!", t));
    CHECK_FALSE(try_parse_timestamp("00:99:00", t));
    CHECK(try_parse_timestamp("12:34:56", t));
    CHECK(t.seconds == 12 * 3600 + 34 * 60 + 56);
}
