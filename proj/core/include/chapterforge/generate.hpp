#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chapterforge/model.hpp"
#include "chapterforge/prompt.hpp"

namespace chapterforge {

struct GeneratorRequest {
    std::string prompt;
    int max_output_tokens = 2048;
    double temperature = 0.0;
};

struct TokenUsage {
    std::size_t prompt_tokens = 0;
    std::size_t completion_tokens = 0;
};

struct GeneratorResponse {
    std::string raw_text;
    std::optional<TokenUsage> usage;
};

// A text generator. Implementations must be safe to share across threads;
// every call is independent.
class GeneratorBackend {
public:
    virtual ~GeneratorBackend() = default;

    virtual GeneratorResponse generate(const GeneratorRequest& request) const = 0;
    virtual std::string_view name() const = 0;
};

// Validates the request (non-empty prompt, temperature >= 0) and dispatches.
GeneratorResponse generate(const GeneratorBackend& backend, const GeneratorRequest& request);

// Oracle marker recognized by the mock backend. Chosen to never occur in
// natural transcript text.
inline constexpr std::string_view kChapterMarker = "\xC2\xA7" "CHAPTER" "\xC2\xA7";  // §CHAPTER§

// Deterministic backend for oracle testing: emits one "HH:MM:SS - Title" line
// for every prompt transcript line whose text carries kChapterMarker, using
// that line's (start) timestamp and the text after the marker as the title.
class MockBackend : public GeneratorBackend {
public:
    GeneratorResponse generate(const GeneratorRequest& request) const override;
    std::string_view name() const override { return "mock"; }
};

struct ParseReport {
    std::size_t discarded_lines = 0;       // lines that are not chapter entries
    std::size_t clamped = 0;               // starts clamped into [0, duration)
    std::size_t dropped_non_monotonic = 0; // starts <= the previous kept start
    bool coerced_first_to_zero = false;
};

struct ParsedChapters {
    ChapterSet chapters;
    ParseReport report;
};

// Extracts "HH:MM:SS - Title" lines from arbitrary generator output,
// discarding everything else, clamping starts into [0, duration), and
// enforcing strictly increasing starts. With coerce_first_to_zero the first
// chapter is moved to 00:00:00 so the set spans the whole video. Throws
// NoChaptersParsedError when nothing usable remains.
ParsedChapters parse_chapter_output(const std::string& raw, Timestamp duration,
                                    bool coerce_first_to_zero = true);

// One "HH:MM:SS - Title" line per chapter; inverse of the chapter-file loader.
std::string write_chapters(const ChapterSet& cs);

struct WindowingConfig {
    std::size_t window_tokens = 15000;
    TokenCounter counter = default_token_counter();
    // Truncation baseline: process only the first window and discard the rest.
    bool first_window_only = false;
};

struct WindowReport {
    std::size_t lines = 0;
    std::size_t tokens = 0;
    std::size_t chapters_parsed = 0;
    std::size_t chapters_kept = 0;
};

struct RunReport {
    std::vector<WindowReport> windows;
    std::size_t total_transcript_tokens = 0;
    std::size_t discarded_lines = 0;
    std::size_t clamped = 0;
    std::size_t dropped_non_monotonic = 0;  // within windows and across the merge
    std::size_t dropped_out_of_window = 0;  // hallucinated before a window's first line
    std::size_t empty_windows = 0;          // later windows that contributed nothing
    bool coerced_first_to_zero = false;
    bool used_fallback_frame_plan = false;  // set by the pipeline layer
};

struct ChapterRunResult {
    ChapterSet chapters;
    RunReport report;
};

// Greedy partition of transcript lines into consecutive windows whose token
// sums stay within the budget; a single oversized line occupies its own
// window. Returns [first, last) index ranges covering every line exactly once.
std::vector<std::pair<std::size_t, std::size_t>> partition_windows(
    const std::vector<TranscriptLine>& lines, std::size_t window_tokens);

// Full prediction for one document: render the transcript, split it into
// token-budgeted windows, query the backend per window (each prompt carries
// the full video duration), and merge the per-window chapters by absolute
// timestamp. The first parsed chapter is coerced to 00:00:00 only on the
// final merged output.
ChapterRunResult chapter_video(const VideoDocument& doc, const PromptOptions& opts,
                               const GeneratorBackend& backend, const WindowingConfig& windowing);

std::string to_json_string(const RunReport& report);

}  // namespace chapterforge
