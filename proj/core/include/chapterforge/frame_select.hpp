#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "chapterforge/model.hpp"

namespace chapterforge {

// Hard cap on planned frames, applied by truncation from the front so the
// earliest timestamps survive.
inline constexpr std::size_t kFrameCap = 100;

enum class SelectionStrategy {
    equidistant,
    every_k_seconds,
    shot_boundaries,
    speech_based,
    no_speech_fallback,
};

std::string_view strategy_name(SelectionStrategy s);

// The timestamps at which frames would be sampled for captioning. Strictly
// increasing, all before the video duration, at most kFrameCap entries.
struct FramePlan {
    std::vector<Timestamp> timestamps;
    SelectionStrategy strategy = SelectionStrategy::equidistant;
};

// n interval midpoints: floor(duration * (i + 0.5) / n), deduplicated.
FramePlan select_equidistant(Timestamp duration, std::size_t n);

// {0, k, 2k, ...} below the duration, truncated to the cap.
FramePlan select_every_k(Timestamp duration, std::uint32_t k);

// Frames at predicted chapter boundaries (speech-guided selection).
FramePlan select_from_boundaries(const ChapterSet& predicted);

// For videos without any speech: every 10 seconds, capped. Throws
// ValidationError when the document does contain speech.
FramePlan select_no_speech_fallback(const VideoDocument& doc);

struct ShotBoundaryLoadResult {
    FramePlan plan;
    std::size_t dropped_out_of_range = 0;
};

// Shot-boundary file: JSONL of {"time": <number>}. Detector output is
// ingested as data; input need not be sorted or unique.
ShotBoundaryLoadResult load_shot_boundaries(const std::filesystem::path& path, Timestamp duration);

}  // namespace chapterforge
