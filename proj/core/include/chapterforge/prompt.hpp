#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "chapterforge/model.hpp"

namespace chapterforge {

// Token counting is pluggable so an exact model tokenizer can be dropped in.
// The default is a deterministic heuristic: ceil(utf8_bytes / 4), with
// count("") == 0 and monotonicity under concatenation.
using TokenCounter = std::function<std::size_t(std::string_view)>;

std::size_t heuristic_token_count(std::string_view text);
TokenCounter default_token_counter();

// Task sentences substituted into the instruction template. Only the
// both-modalities wording is fixed by the upstream format; the single-modality
// variants are symmetric edits frozen by golden tests.
inline constexpr std::string_view kTaskBothModalities =
    "use the provided captions and ASR transcript to identify distinct chapters based on "
    "content shifts.";
inline constexpr std::string_view kTaskSpeechOnly =
    "use the provided ASR transcript to identify distinct chapters based on content shifts.";
inline constexpr std::string_view kTaskCaptionsOnly =
    "use the provided captions to identify distinct chapters based on content shifts.";

struct PromptOptions {
    bool include_speech = true;
    bool include_captions = true;
    // Prefix lines with "ASR"/"Caption". Only applies when both modalities are
    // included; single-modality transcripts always omit the prefix.
    bool modality_prefixes = true;
    // Render speech timestamps as "start - end" instead of start only.
    bool include_asr_end = false;
    std::string task_text;

    // Fills task_text to match the selected modalities.
    static PromptOptions defaults(bool speech = true, bool captions = true);

    // Throws ValidationError when no modality is selected or task_text is empty.
    void validate() const;
};

// One rendered transcript line; the unit of token-budgeted windowing.
struct TranscriptLine {
    std::size_t source_index = 0;  // into VideoDocument::utterances()
    std::string rendered;          // ends with exactly one '\n'
    std::size_t token_count = 0;
};

// "ASR HH:MM:SS: text" / "Caption HH:MM:SS: text", or "HH:MM:SS: text" when a
// single modality is selected. No trailing newline.
std::string render_line(const TimedUtterance& u, const PromptOptions& opts);

// Renders every utterance that passes the modality filter, in document order
// (start, speech before caption, file order). An empty result is a valid
// "empty transcript" condition for the caller to handle, not an error here.
std::vector<TranscriptLine> build_transcript(const VideoDocument& doc, const PromptOptions& opts,
                                             const TokenCounter& counter = default_token_counter());

// Concatenation of the rendered lines.
std::string transcript_text(const std::vector<TranscriptLine>& lines);

// Instantiates the instruction template with the video duration and the task
// sentence, followed by the transcript. Throws ValidationError on an empty
// transcript.
std::string build_prompt(const VideoDocument& doc, const std::string& transcript,
                         const PromptOptions& opts);

struct TokenCountReport {
    std::vector<std::size_t> per_line;
    std::size_t total = 0;
};

TokenCountReport count_tokens(const TokenCounter& counter, const std::vector<TranscriptLine>& lines);

// Token cost of the instruction template alone (no transcript); roughly 90
// tokens under typical tokenizers and independent of video length.
std::size_t prompt_overhead_tokens(const VideoDocument& doc, const PromptOptions& opts,
                                   const TokenCounter& counter = default_token_counter());

}  // namespace chapterforge
