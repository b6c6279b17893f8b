#pragma once

// Shared reference data: the interleaved transcript listing, the ten-chapter
// reference file, and two hand-constructed segment-matching fixtures whose
// greedy IoUs are known exactly.

#include <string_view>
#include <vector>

#include "chapterforge/model.hpp"

namespace fixtures {

inline constexpr std::uint32_t kReferenceDurationSeconds = 592;  // 00:09:52

inline constexpr std::string_view kInterleavedTranscript =
    "ASR 00:00:00: This place has blown our minds.\n"
    "Caption 00:00:01: The image features two individuals, a man and a woman, standing "
    "outdoors in a natural setting with rocky terrain and sparse vegetation in the "
    "background.\n"
    "ASR 00:00:04: Look at this.\n"
    "ASR 00:00:05: In this episode, we're exploring Buckhorn Wash, Utah.\n";

inline constexpr std::string_view kSpeechOnlyTranscript =
    "00:00:00: This place has blown our minds.\n"
    "00:00:04: Look at this.\n"
    "00:00:05: In this episode, we're exploring Buckhorn Wash, Utah.\n";

inline constexpr std::string_view kReferenceChapters =
    "00:00:00 - We're at Buckhorn Wash, Utah\n"
    "00:00:51 - Morrison Knudson (MK) Tunnels\n"
    "00:01:25 - In Buckhorn Wash, Like a Little Zion\n"
    "00:02:15 - Buckhorn Wash Pictograph Panel\n"
    "00:03:25 - Camping in the Wash, Driving Through the Canyon\n"
    "00:04:47 - Swinging Bridge Campground & San Rafael Bridge\n"
    "00:06:08 - Buckhorn Draw Visitor Center, Well, & Spanish Trail\n"
    "00:08:37 - Boondocking at Utah Lake\n"
    "00:08:57 - Scenes from the Next Episode - Nevada: Lemoille Canyon\n"
    "00:09:14 - Bloopers\n";

inline constexpr std::string_view kBothModalitiesTask =
    "use the provided captions and ASR transcript to identify distinct chapters based on "
    "content shifts.";

// The four records behind kInterleavedTranscript, in scrambled input order so
// document construction has to sort them.
inline chapterforge::VideoDocument reference_document() {
    using chapterforge::Timestamp;
    std::vector<chapterforge::TimedUtterance> records;
    records.push_back(chapterforge::make_speech(
        Timestamp{5}, Timestamp{8}, "In this episode, we're exploring Buckhorn Wash, Utah."));
    records.push_back(chapterforge::make_caption(
        Timestamp{1},
        "The image features two individuals, a man and a woman, standing outdoors in a "
        "natural setting with rocky terrain and sparse vegetation in the background."));
    records.push_back(
        chapterforge::make_speech(Timestamp{0}, Timestamp{3}, "This place has blown our minds."));
    records.push_back(chapterforge::make_speech(Timestamp{4}, Timestamp{5}, "Look at this."));
    return chapterforge::VideoDocument::create("buckhorn", Timestamp{kReferenceDurationSeconds},
                                               std::move(records));
}

inline chapterforge::ChapterSet reference_chapter_set() {
    using chapterforge::Chapter;
    using chapterforge::Timestamp;
    std::vector<Chapter> chapters;
    chapters.emplace_back(Timestamp{0}, "We're at Buckhorn Wash, Utah");
    chapters.emplace_back(Timestamp{51}, "Morrison Knudson (MK) Tunnels");
    chapters.emplace_back(Timestamp{85}, "In Buckhorn Wash, Like a Little Zion");
    chapters.emplace_back(Timestamp{135}, "Buckhorn Wash Pictograph Panel");
    chapters.emplace_back(Timestamp{205}, "Camping in the Wash, Driving Through the Canyon");
    chapters.emplace_back(Timestamp{287}, "Swinging Bridge Campground & San Rafael Bridge");
    chapters.emplace_back(Timestamp{368}, "Buckhorn Draw Visitor Center, Well, & Spanish Trail");
    chapters.emplace_back(Timestamp{517}, "Boondocking at Utah Lake");
    chapters.emplace_back(Timestamp{537}, "Scenes from the Next Episode - Nevada: Lemoille Canyon");
    chapters.emplace_back(Timestamp{554}, "Bloopers");
    return chapterforge::ChapterSet::create(std::move(chapters),
                                            Timestamp{kReferenceDurationSeconds});
}

struct MatchFixture {
    chapterforge::ChapterSet pred;
    chapterforge::ChapterSet gt;
};

inline chapterforge::ChapterSet chapter_set_at(const std::vector<std::uint32_t>& starts,
                                               std::uint32_t duration) {
    std::vector<chapterforge::Chapter> chapters;
    for (std::size_t i = 0; i < starts.size(); ++i) {
        chapters.emplace_back(chapterforge::Timestamp{starts[i]}, "c" + std::to_string(i));
    }
    return chapterforge::ChapterSet::create(std::move(chapters),
                                            chapterforge::Timestamp{duration});
}

// Five ground-truth chapters vs four predictions over a 2265 s video. Greedy
// matching pairs them with IoUs exactly {122/125, 134/250, 893/1000, 983/1000}
// = {0.976, 0.536, 0.893, 0.983}; one ground-truth chapter stays unmatched.
// Mean = 84.7 exactly.
inline MatchFixture high_overlap_fixture() {
    return MatchFixture{chapter_set_at({0, 122, 372, 1282}, 2265),
                        chapter_set_at({0, 125, 148, 282, 1265}, 2265)};
}

// Four ground-truth chapters vs three predictions over a 1280 s video. Greedy
// IoUs are exactly {17/28, 33/70, 27/67} ~= {0.6071, 0.4714, 0.4030}; mean
// 49.385.
inline MatchFixture low_overlap_fixture() {
    return MatchFixture{chapter_set_at({0, 170, 610}, 1280),
                        chapter_set_at({0, 280, 870, 1010}, 1280)};
}

}  // namespace fixtures
