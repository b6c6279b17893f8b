#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "chapterforge/model.hpp"

namespace chapterforge {

// One matched (ground truth, prediction) segment pair. Zero-overlap pairs are
// never matched.
struct MatchedPair {
    std::size_t gt_index = 0;
    std::size_t pred_index = 0;
    double iou = 0.0;
};

// Intersection over union of two half-open segments, in [0, 1].
double segment_iou(const Segment& a, const Segment& b);

// Repeatedly matches the unused (gt, pred) pair with the highest IoU, ties
// broken by lower gt index then lower pred index, stopping when no positive
// overlap remains. Each segment is used at most once. Returned in selection
// order. match_zero_overlap is a sensitivity mode that keeps pairing
// non-overlapping segments (iou 0) until either side is exhausted, relaxing
// the iou > 0 invariant on the result.
std::vector<MatchedPair> greedy_match(std::span<const Segment> pred, std::span<const Segment> gt,
                                      bool match_zero_overlap = false);

// Mean IoU over greedily matched segment pairs, as a percentage. 0 when
// nothing overlaps.
double tiou(const ChapterSet& pred, const ChapterSet& gt);

// The ten IoU thresholds 0.50 .. 0.95 used for threshold-averaged F1.
std::array<double, 10> f1_thresholds();

// Mean over the IoU thresholds of the harmonic mean of precision and recall,
// as a percentage.
double f1(const ChapterSet& pred, const ChapterSet& gt);

struct PrecisionRecall {
    double precision = 0.0;
    double recall = 0.0;
};

// Precision/recall of chapter start times under a one-to-one matching by
// smallest |delta t| (ties by earlier gt, then earlier pred); a pair counts
// iff |delta t| <= delta_seconds. Empty inputs yield zeros.
PrecisionRecall boundary_pr(std::span<const Timestamp> pred_starts,
                            std::span<const Timestamp> gt_starts, std::uint32_t delta_seconds);
PrecisionRecall boundary_pr(const ChapterSet& pred, const ChapterSet& gt,
                            std::uint32_t delta_seconds);

// Precision/recall of segments whose greedy-matched IoU reaches tau.
PrecisionRecall segment_pr_at_iou(std::span<const Segment> pred, std::span<const Segment> gt,
                                  double tau);
PrecisionRecall segment_pr_at_iou(const ChapterSet& pred, const ChapterSet& gt, double tau);

// Unique titles divided by total titles; exact string comparison on the
// already-trimmed titles (optionally ASCII case-folded).
double repetition_ratio(const ChapterSet& cs, bool case_insensitive = false);

// Predicted chapter count minus ground-truth chapter count.
int count_delta(const ChapterSet& pred, const ChapterSet& gt);

// Mean token-level F1 between lowercased whitespace-tokenized titles of the
// matched pairs. A rough title-quality signal only; not comparable to
// caption-quality metrics reported elsewhere.
double title_token_f1(const ChapterSet& pred, const ChapterSet& gt,
                      std::span<const MatchedPair> pairs);

// All per-video scores. tiou/f1 are percentages in [0, 100]; precision and
// recall values are ratios in [0, 1].
struct MetricsReport {
    std::string video_id;
    double tiou = 0.0;
    double f1 = 0.0;
    PrecisionRecall pr_at_3s;
    PrecisionRecall pr_at_5s;
    PrecisionRecall pr_at_iou_50;
    PrecisionRecall pr_at_iou_70;
    double repetition_ratio = 0.0;
    int count_delta = 0;
    double title_token_f1 = 0.0;
    bool empty_prediction = false;
};

struct MetricsOptions {
    bool title_case_insensitive = false;  // fold titles for the repetition ratio
    bool match_zero_overlap = false;      // sensitivity mode for pair-based scores
};

MetricsReport compute_metrics(const ChapterSet& pred, const ChapterSet& gt,
                              const MetricsOptions& options = {});

// Zeroed report for a video whose prediction is missing or unusable.
MetricsReport empty_prediction_metrics(const ChapterSet& gt);

// Corpus-level aggregation: means of every score, plus the median chapter
// count delta.
struct CorpusSummary {
    std::size_t videos = 0;
    std::size_t empty_predictions = 0;
    double tiou = 0.0;
    double f1 = 0.0;
    PrecisionRecall pr_at_3s;
    PrecisionRecall pr_at_5s;
    PrecisionRecall pr_at_iou_50;
    PrecisionRecall pr_at_iou_70;
    double repetition_ratio = 0.0;
    double count_delta_mean = 0.0;
    double count_delta_median = 0.0;
    double title_token_f1 = 0.0;
};

CorpusSummary aggregate_metrics(std::span<const MetricsReport> reports);

// JSON serialization with stable field order.
std::string to_json_string(const MetricsReport& report);
std::string to_json_string(const CorpusSummary& summary);

}  // namespace chapterforge
