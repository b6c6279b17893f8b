#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "chapterforge/model.hpp"

namespace chapterforge {

// Smallest spacing between generated chapter starts. Keeps IoU matching
// non-degenerate at whole-second precision.
inline constexpr std::uint32_t kMinChapterGapSeconds = 30;

struct SynthConfig {
    std::uint64_t seed = 1;
    std::size_t num_videos = 10;
    std::uint32_t duration_min_seconds = 300;
    std::uint32_t duration_max_seconds = 1200;
    std::size_t chapters_min = 3;
    std::size_t chapters_max = 13;
    double speech_tokens_per_minute = 257.0;  // under the default token counter
    double caption_tokens = 66.0;             // target tokens per caption line
    double marker_rate = 1.0;                 // fraction of chapter starts carrying the oracle marker
    std::uint32_t boundary_jitter_seconds = 0;
    std::size_t extra_captions = 4;           // uniform extras beyond chapter starts

    // Throws ConfigError on empty ranges, rates outside [0,1], durations that
    // cannot hold chapters_max starts at the minimum gap, or jitter wide
    // enough to reorder boundaries.
    void validate() const;
};

struct SynthVideo {
    VideoDocument document;
    ChapterSet ground_truth;
    // What a marker-faithful generator recovers: the (jittered) marker starts
    // with ground-truth titles, first start coerced to zero. Empty when no
    // chapter received a marker.
    std::optional<ChapterSet> expected_prediction;
};

// Deterministic for a fixed config: per-video RNG streams are split from the
// corpus seed, so videos are independent of each other and of corpus size.
std::vector<SynthVideo> generate_corpus(const SynthConfig& config);

// Writes one ASR JSONL, caption JSONL, and ground-truth chapter file per
// video, plus a corpus manifest, in the ingest formats. Returns the manifest
// path. Same corpus, same bytes.
std::filesystem::path write_corpus(std::span<const SynthVideo> corpus,
                                   const std::filesystem::path& out_dir);

}  // namespace chapterforge
