#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "chapterforge/config.hpp"
#include "chapterforge/generate.hpp"
#include "chapterforge/ingest.hpp"
#include "chapterforge/metrics.hpp"

namespace chapterforge {

struct ChapterRunOptions {
    std::filesystem::path manifest;
    std::filesystem::path out_dir;
    PipelineConfig config;
    // Speech-only pass first, then re-run with captions spliced at the
    // resulting frame-plan timestamps.
    bool two_stage = false;
    std::size_t jobs = 0;  // 0 = logical CPUs
};

struct VideoOutcome {
    std::string video_id;
    bool ok = false;
    std::string error;
    std::filesystem::path chapters_path;
    RunReport report;
    std::size_t planned_frames = 0;  // two-stage only
    std::uint32_t duration_seconds = 0;
};

struct ChapterRunSummary {
    std::vector<VideoOutcome> videos;
    std::size_t failures = 0;
};

// Chapters every video in the manifest, writing <video_id>.chapters.txt plus
// a per-video JSON run report and a corpus run_report.json under out_dir.
// Output files are written atomically (temp file + rename). Videos are
// processed concurrently up to `jobs`; windows within a video stay
// sequential. Per-video failures are recorded, not thrown.
ChapterRunSummary run_chapter(const ChapterRunOptions& options, const GeneratorBackend& backend);

struct EvalOptions {
    std::filesystem::path pred_manifest;
    std::filesystem::path gt_manifest;
    std::size_t jobs = 0;
    MetricsOptions metrics;
};

struct EvalResult {
    std::vector<MetricsReport> videos;  // ground-truth manifest order
    CorpusSummary corpus;
};

// Scores predictions against ground truth, video by video. The two manifests
// must cover the same video ids (error lists any missing ones); ground-truth
// durations are authoritative. A prediction that is missing or unparseable
// scores as an empty prediction rather than aborting the corpus run.
EvalResult run_eval(const EvalOptions& options);

// Single-pair convenience for evaluating two chapter files directly.
MetricsReport eval_pair(const std::filesystem::path& pred_path,
                        const std::filesystem::path& gt_path, Timestamp duration,
                        const MetricsOptions& metrics = {});

std::string to_json_string(const EvalResult& result);

// Writes contents to path via a temp file in the same directory plus rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace chapterforge
