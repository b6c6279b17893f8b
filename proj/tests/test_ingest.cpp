#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "chapterforge/errors.hpp"
#include "chapterforge/generate.hpp"
#include "chapterforge/ingest.hpp"
#include "fixtures.hpp"
#include "temp_dir.hpp"

using namespace chapterforge;
namespace fs = std::filesystem;

TEST_CASE("load_asr floors fractional starts and keeps ends") {
    TempDir dir;
    const auto p = dir.file("a.jsonl",
                            R"({"start": 0.0, "end": 3.2, "text": "This place has blown our minds."})"
                            "\n"
                            R"({"start": 4.9, "end": 5.0, "text": "Look at this."})"
                            "\n");
    const auto result = load_asr(p, Timestamp{592});
    REQUIRE(result.utterances.size() == 2);
    CHECK(result.utterances[0].start.seconds == 0);
    CHECK(result.utterances[0].end->seconds == 3);
    CHECK(result.utterances[0].modality == Modality::speech);
    CHECK(result.utterances[1].start.seconds == 4);
    CHECK(result.utterances[1].end->seconds == 5);
    CHECK(result.stats.records == 2);
    CHECK(result.stats.dropped_out_of_range == 0);
}

TEST_CASE("load_asr on an empty file yields an empty list") {
    TempDir dir;
    const auto result = load_asr(dir.file("empty.jsonl", ""), Timestamp{60});
    CHECK(result.utterances.empty());
    CHECK(result.stats.records == 0);
}

TEST_CASE("records beyond the duration are dropped and counted") {
    TempDir dir;
    const auto p = dir.file("a.jsonl",
                            R"({"start": 1, "end": 2, "text": "ok"})"
                            "\n"
                            R"({"start": 99, "end": 100, "text": "trailing garbage"})"
                            "\n");
    const auto result = load_asr(p, Timestamp{50});
    CHECK(result.utterances.size() == 1);
    CHECK(result.stats.dropped_out_of_range == 1);
}

TEST_CASE("malformed ASR records name the record index") {
    TempDir dir;
    SUBCASE("not json") {
        const auto p = dir.file("a.jsonl", "{\"start\": 1}\nnot json\n");
        CHECK_THROWS_WITH_AS(load_asr(p, Timestamp{60}), doctest::Contains("record 1"), ParseError);
    }
    SUBCASE("end precedes start") {
        const auto p = dir.file("a.jsonl",
                                R"({"start": 1, "end": 2, "text": "a"})"
                                "\n"
                                R"({"start": 5, "end": 4, "text": "b"})"
                                "\n");
        CHECK_THROWS_WITH_AS(load_asr(p, Timestamp{60}), doctest::Contains("record 2"), ParseError);
    }
    SUBCASE("empty text") {
        const auto p = dir.file("a.jsonl", R"({"start": 1, "end": 2, "text": ""})" "\n");
        CHECK_THROWS_AS(load_asr(p, Timestamp{60}), ParseError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_asr(dir.path / "nope.jsonl", Timestamp{60}), IoError);
    }
}

TEST_CASE("load_captions keeps file order for equal times") {
    TempDir dir;
    const auto p = dir.file("c.jsonl",
                            R"({"time": 1, "text": "The image features two individuals..."})"
                            "\n"
                            R"({"time": 1, "text": "second at the same time"})"
                            "\n"
                            R"({"time": 0, "text": "earlier"})"
                            "\n");
    const auto result = load_captions(p, Timestamp{60});
    REQUIRE(result.utterances.size() == 3);
    CHECK(result.utterances[0].text == "earlier");
    CHECK(result.utterances[1].text == "The image features two individuals...");
    CHECK(result.utterances[2].text == "second at the same time");
    CHECK(!result.utterances[0].end.has_value());
}

TEST_CASE("caption records beyond duration are dropped with a count") {
    TempDir dir;
    const auto p = dir.file("c.jsonl",
                            R"({"time": 1, "text": "keep"})"
                            "\n"
                            R"({"time": 61, "text": "drop"})"
                            "\n");
    const auto result = load_captions(p, Timestamp{60});
    CHECK(result.utterances.size() == 1);
    CHECK(result.stats.dropped_out_of_range == 1);
}

TEST_CASE("chapter files round-trip through the reference listing") {
    TempDir dir;
    const auto p = dir.file("ch.txt", std::string(fixtures::kReferenceChapters));
    const ChapterSet cs = load_chapters(p, Timestamp{fixtures::kReferenceDurationSeconds});
    REQUIRE(cs.size() == 10);
    CHECK(cs.chapters()[0].start.seconds == 0);
    CHECK(cs.chapters()[1].start.seconds == 51);
    CHECK(cs.chapters()[1].title == "Morrison Knudson (MK) Tunnels");
    // A title containing the separator itself splits only on the first one.
    CHECK(cs.chapters()[8].title == "Scenes from the Next Episode - Nevada: Lemoille Canyon");
    CHECK(write_chapters(cs) == fixtures::kReferenceChapters);
}

TEST_CASE("wrapped chapter titles rejoin with a single space") {
    TempDir dir;
    const auto p = dir.file("ch.txt",
                            "00:00:00 - We're at Buckhorn Wash,\nUtah\n"
                            "00:00:51 - Morrison Knudson (MK) Tunnels\n");
    const ChapterSet cs = load_chapters(p, Timestamp{592});
    REQUIRE(cs.size() == 2);
    CHECK(cs.chapters()[0].title == "We're at Buckhorn Wash, Utah");
}

TEST_CASE("blank lines are allowed between chapter entries") {
    TempDir dir;
    const auto p = dir.file("ch.txt", "00:00:00 - A\n\n00:00:10 - B\n\n");
    CHECK(load_chapters(p, Timestamp{60}).size() == 2);
}

TEST_CASE("single-entry chapter file spans the whole video") {
    TempDir dir;
    const auto p = dir.file("ch.txt", "00:00:00 - X\n");
    const ChapterSet cs = load_chapters(p, Timestamp{60});
    CHECK(cs.size() == 1);
    const auto segments = segments_of(cs);
    CHECK(segments[0].end.seconds == 60);
}

TEST_CASE("chapter file errors carry line numbers") {
    TempDir dir;
    SUBCASE("first line must carry a timestamp") {
        const auto p = dir.file("ch.txt", "no timestamp here\n00:00:00 - A\n");
        CHECK_THROWS_AS(load_chapters(p, Timestamp{60}), ParseError);
    }
    SUBCASE("non-increasing starts name the lines") {
        const auto p = dir.file("ch.txt", "00:00:10 - A\n00:00:05 - B\n");
        CHECK_THROWS_WITH_AS(load_chapters(p, Timestamp{60}), doctest::Contains("line 2"),
                             ParseError);
    }
    SUBCASE("start beyond duration") {
        const auto p = dir.file("ch.txt", "00:02:00 - A\n");
        CHECK_THROWS_AS(load_chapters(p, Timestamp{60}), ParseError);
    }
}

TEST_CASE("manifest loads entries and resolves relative paths") {
    TempDir dir;
    dir.file("a.jsonl", R"({"start": 0, "end": 1, "text": "hi"})" "\n");
    dir.file("c.jsonl", R"({"time": 2, "text": "a frame"})" "\n");
    dir.file("ch.txt", "00:00:00 - A\n");
    const auto manifest = dir.file(
        "manifest.jsonl",
        R"({"video_id": "v1", "duration": 60, "asr": "a.jsonl", "captions": "c.jsonl", "chapters": "ch.txt"})"
        "\n"
        R"({"video_id": "v2", "duration": 30.9, "asr": null, "captions": null, "chapters": null})"
        "\n");
    const auto entries = load_manifest(manifest);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].video_id == "v1");
    CHECK(entries[0].duration.seconds == 60);
    CHECK(entries[0].asr == dir.path / "a.jsonl");
    CHECK(entries[1].duration.seconds == 30);  // floored
    CHECK(!entries[1].asr.has_value());

    const auto loaded = load_document(entries[0]);
    CHECK(loaded.document.utterances().size() == 2);
    CHECK(loaded.document.video_id() == "v1");
    CHECK(loaded.asr_stats.records == 1);
    CHECK(loaded.caption_stats.records == 1);
}
