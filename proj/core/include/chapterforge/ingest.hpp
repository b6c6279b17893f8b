#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chapterforge/model.hpp"

namespace chapterforge {

struct LoadStats {
    std::size_t records = 0;                // records accepted
    std::size_t dropped_out_of_range = 0;   // start beyond the video duration
};

struct UtteranceLoadResult {
    std::vector<TimedUtterance> utterances;  // sorted by start (stable by file order)
    LoadStats stats;
};

// ASR file: UTF-8 JSONL, one {"start": <number>, "end": <number>, "text": <string>}
// per line. Fractional seconds are floored. Records starting beyond the video
// duration are dropped and counted rather than failing the load.
UtteranceLoadResult load_asr(const std::filesystem::path& path, Timestamp duration);

// Caption file: UTF-8 JSONL, one {"time": <number>, "text": <string>} per line.
UtteranceLoadResult load_captions(const std::filesystem::path& path, Timestamp duration);

// Chapter file: UTF-8 text, one "HH:MM:SS - Title" per line. Blank lines are
// skipped. A non-blank line that does not begin with a timestamp is treated as
// a wrapped continuation of the previous title and rejoined with one space.
ChapterSet load_chapters(const std::filesystem::path& path, Timestamp duration);

// Text-level core of load_chapters, exposed for round-trip testing.
ChapterSet parse_chapter_text(std::string_view text, Timestamp duration);

struct ManifestEntry {
    std::string video_id;
    Timestamp duration;
    std::optional<std::filesystem::path> asr;
    std::optional<std::filesystem::path> captions;
    std::optional<std::filesystem::path> chapters;
};

// Corpus manifest: JSONL, one video per line with fields video_id, duration,
// asr, captions, chapters (paths may be null). Relative paths resolve against
// the manifest's directory.
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);

struct DocumentLoadResult {
    VideoDocument document;
    LoadStats asr_stats;
    LoadStats caption_stats;
};

// Assembles a VideoDocument from the ASR and caption files named by a
// manifest entry (either may be absent).
DocumentLoadResult load_document(const ManifestEntry& entry);

}  // namespace chapterforge
