#include <doctest.h>

#include <set>

#include "chapterforge/errors.hpp"
#include "chapterforge/prompt.hpp"
#include "fixtures.hpp"

using namespace chapterforge;

TEST_CASE("render_line with both modalities carries prefixes") {
    const PromptOptions opts = PromptOptions::defaults();
    CHECK(render_line(make_speech(Timestamp{0}, Timestamp{3}, "This place has blown our minds."),
                      opts) == "ASR 00:00:00: This place has blown our minds.");
    CHECK(render_line(make_caption(Timestamp{1}, "The image features..."), opts) ==
          "Caption 00:00:01: The image features...");
}

TEST_CASE("single-modality rendering omits the prefix") {
    const PromptOptions opts = PromptOptions::defaults(true, false);
    CHECK(render_line(make_speech(Timestamp{5}, std::nullopt, "In this episode..."), opts) ==
          "00:00:05: In this episode...");
}

TEST_CASE("prefixes can be disabled while keeping both modalities") {
    PromptOptions opts = PromptOptions::defaults();
    opts.modality_prefixes = false;
    CHECK(render_line(make_speech(Timestamp{0}, std::nullopt, "hello"), opts) == "00:00:00: hello");
    CHECK(render_line(make_caption(Timestamp{1}, "a frame"), opts) == "00:00:01: a frame");
}

TEST_CASE("end timestamps render as a start - end field when enabled") {
    PromptOptions opts = PromptOptions::defaults();
    opts.include_asr_end = true;
    CHECK(render_line(make_speech(Timestamp{0}, Timestamp{3}, "hello"), opts) ==
          "ASR 00:00:00 - 00:00:03: hello");
    // Captions have no end; speech without an end falls back to start only.
    CHECK(render_line(make_caption(Timestamp{1}, "a frame"), opts) == "Caption 00:00:01: a frame");
    CHECK(render_line(make_speech(Timestamp{4}, std::nullopt, "x"), opts) == "ASR 00:00:04: x");
}

TEST_CASE("interleaved transcript matches the reference listing byte for byte") {
    const auto doc = fixtures::reference_document();
    const auto lines = build_transcript(doc, PromptOptions::defaults());
    CHECK(transcript_text(lines) == fixtures::kInterleavedTranscript);
}

TEST_CASE("speech-only transcript matches the reference listing") {
    const auto doc = fixtures::reference_document();
    const auto lines = build_transcript(doc, PromptOptions::defaults(true, false));
    CHECK(transcript_text(lines) == fixtures::kSpeechOnlyTranscript);
}

TEST_CASE("modality filter can empty the transcript without crashing") {
    std::vector<TimedUtterance> records;
    records.push_back(make_speech(Timestamp{0}, std::nullopt, "speech only"));
    const auto doc = VideoDocument::create("v", Timestamp{10}, std::move(records));
    const auto lines = build_transcript(doc, PromptOptions::defaults(false, true));
    CHECK(lines.empty());
}

TEST_CASE("speech ties sort before captions in the transcript") {
    std::vector<TimedUtterance> records;
    records.push_back(make_caption(Timestamp{2}, "frame"));
    records.push_back(make_speech(Timestamp{2}, std::nullopt, "voice"));
    const auto doc = VideoDocument::create("v", Timestamp{10}, std::move(records));
    const auto lines = build_transcript(doc, PromptOptions::defaults());
    REQUIRE(lines.size() == 2);
    CHECK(lines[0].rendered == "ASR 00:00:02: voice\n");
    CHECK(lines[1].rendered == "Caption 00:00:02: frame\n");
}

TEST_CASE("prompt instantiates the template with duration and task sentence") {
    const auto doc = fixtures::reference_document();
    const PromptOptions opts = PromptOptions::defaults();
    const std::string transcript{fixtures::kInterleavedTranscript};
    const std::string prompt = build_prompt(doc, transcript, opts);

    const std::string expected_head =
        "Given the complete transcript of a video of duration 00:09:52, "
        "use the provided captions and ASR transcript to identify distinct chapters "
        "based on content shifts. "
        "Identify the approximate start time of each chapter in the format "
        "`hh:mm:ss - Title'. Ensure each chapter entry is on a new line. Focus on "
        "significant topic changes that would merit a new chapter in a video, but do "
        "not provide summaries of the chapters.\n";
    CHECK(prompt == expected_head + transcript);
    CHECK(opts.task_text == fixtures::kBothModalitiesTask);
}

TEST_CASE("prompt construction rejects bad inputs") {
    const auto doc = fixtures::reference_document();
    PromptOptions opts = PromptOptions::defaults();
    CHECK_THROWS_AS(build_prompt(doc, "", opts), ValidationError);
    opts.task_text.clear();
    CHECK_THROWS_AS(opts.validate(), ValidationError);
    PromptOptions no_modalities = PromptOptions::defaults();
    no_modalities.include_speech = false;
    no_modalities.include_captions = false;
    CHECK_THROWS_AS(no_modalities.validate(), ValidationError);
}

TEST_CASE("default token counter is the byte heuristic") {
    CHECK(heuristic_token_count("") == 0);
    CHECK(heuristic_token_count("Look at this.") == 4);  // ceil(13/4)
    CHECK(heuristic_token_count("abcd") == 1);
    CHECK(heuristic_token_count("abcde") == 2);
}

TEST_CASE("count_tokens totals match per-line sums") {
    const auto doc = fixtures::reference_document();
    const auto lines = build_transcript(doc, PromptOptions::defaults());
    const auto report = count_tokens(default_token_counter(), lines);
    REQUIRE(report.per_line.size() == lines.size());
    std::size_t sum = 0;
    for (const std::size_t n : report.per_line) {
        sum += n;
    }
    CHECK(report.total == sum);
    CHECK(count_tokens(default_token_counter(), {}).total == 0);
}

TEST_CASE("template overhead is in the expected ballpark and length-independent") {
    const auto doc = fixtures::reference_document();
    const std::size_t overhead = prompt_overhead_tokens(doc, PromptOptions::defaults());
    CHECK(overhead > 60);
    CHECK(overhead < 140);
}

TEST_CASE("rendering is injective on (start, modality, text) with prefixes on") {
    const PromptOptions opts = PromptOptions::defaults();
    std::set<std::string> rendered;
    std::size_t count = 0;
    for (std::uint32_t start : {0u, 1u, 59u, 60u, 3599u}) {
        for (const char* text : {"a", "b", "a b", "00:00:01: a"}) {
            rendered.insert(render_line(make_speech(Timestamp{start}, std::nullopt, text), opts));
            rendered.insert(render_line(make_caption(Timestamp{start}, text), opts));
            count += 2;
        }
    }
    CHECK(rendered.size() == count);
}
