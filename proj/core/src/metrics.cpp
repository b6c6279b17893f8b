#include "chapterforge/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace chapterforge {

double segment_iou(const Segment& a, const Segment& b) {
    const std::uint32_t inter_begin = std::max(a.begin.seconds, b.begin.seconds);
    const std::uint32_t inter_end = std::min(a.end.seconds, b.end.seconds);
    if (inter_end <= inter_begin) {
        return 0.0;
    }
    const std::uint32_t union_begin = std::min(a.begin.seconds, b.begin.seconds);
    const std::uint32_t union_end = std::max(a.end.seconds, b.end.seconds);
    return static_cast<double>(inter_end - inter_begin) /
           static_cast<double>(union_end - union_begin);
}

std::vector<MatchedPair> greedy_match(std::span<const Segment> pred, std::span<const Segment> gt,
                                      bool match_zero_overlap) {
    struct Candidate {
        double iou;
        std::size_t g;
        std::size_t p;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(pred.size() * gt.size());
    for (std::size_t g = 0; g < gt.size(); ++g) {
        for (std::size_t p = 0; p < pred.size(); ++p) {
            const double iou = segment_iou(pred[p], gt[g]);
            if (iou > 0.0 || match_zero_overlap) {
                candidates.push_back(Candidate{iou, g, p});
            }
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.iou != b.iou) {
            return a.iou > b.iou;
        }
        if (a.g != b.g) {
            return a.g < b.g;
        }
        return a.p < b.p;
    });

    std::vector<bool> gt_used(gt.size(), false);
    std::vector<bool> pred_used(pred.size(), false);
    std::vector<MatchedPair> matches;
    for (const Candidate& c : candidates) {
        if (gt_used[c.g] || pred_used[c.p]) {
            continue;
        }
        gt_used[c.g] = true;
        pred_used[c.p] = true;
        matches.push_back(MatchedPair{c.g, c.p, c.iou});
    }
    return matches;
}

double tiou(const ChapterSet& pred, const ChapterSet& gt) {
    const std::vector<Segment> ps = segments_of(pred);
    const std::vector<Segment> gs = segments_of(gt);
    const std::vector<MatchedPair> pairs = greedy_match(ps, gs);
    if (pairs.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (const MatchedPair& pair : pairs) {
        sum += pair.iou;
    }
    return 100.0 * sum / static_cast<double>(pairs.size());
}

std::array<double, 10> f1_thresholds() {
    std::array<double, 10> taus{};
    for (std::size_t i = 0; i < taus.size(); ++i) {
        taus[i] = static_cast<double>(50 + 5 * i) / 100.0;
    }
    return taus;
}

namespace {

PrecisionRecall pr_from_matches(std::span<const MatchedPair> pairs, std::size_t pred_count,
                                std::size_t gt_count, double tau) {
    if (pred_count == 0 || gt_count == 0) {
        return PrecisionRecall{};
    }
    std::size_t correct = 0;
    for (const MatchedPair& pair : pairs) {
        if (pair.iou >= tau) {
            ++correct;
        }
    }
    return PrecisionRecall{static_cast<double>(correct) / static_cast<double>(pred_count),
                           static_cast<double>(correct) / static_cast<double>(gt_count)};
}

double harmonic_f(const PrecisionRecall& pr) {
    const double denom = pr.precision + pr.recall;
    return denom > 0.0 ? 2.0 * pr.precision * pr.recall / denom : 0.0;
}

}  // namespace

double f1(const ChapterSet& pred, const ChapterSet& gt) {
    const std::vector<Segment> ps = segments_of(pred);
    const std::vector<Segment> gs = segments_of(gt);
    double sum = 0.0;
    for (const double tau : f1_thresholds()) {
        // Re-run the matching per threshold, as the metric is defined.
        const std::vector<MatchedPair> pairs = greedy_match(ps, gs);
        sum += harmonic_f(pr_from_matches(pairs, ps.size(), gs.size(), tau));
    }
    return 100.0 * sum / static_cast<double>(f1_thresholds().size());
}

PrecisionRecall boundary_pr(std::span<const Timestamp> pred_starts,
                            std::span<const Timestamp> gt_starts, std::uint32_t delta_seconds) {
    if (pred_starts.empty() || gt_starts.empty()) {
        return PrecisionRecall{};
    }
    struct Candidate {
        std::uint32_t dist;
        std::size_t g;
        std::size_t p;
    };
    std::vector<Candidate> candidates;
    for (std::size_t g = 0; g < gt_starts.size(); ++g) {
        for (std::size_t p = 0; p < pred_starts.size(); ++p) {
            const std::int64_t dt = static_cast<std::int64_t>(gt_starts[g].seconds) -
                                    static_cast<std::int64_t>(pred_starts[p].seconds);
            const auto dist = static_cast<std::uint32_t>(dt < 0 ? -dt : dt);
            if (dist <= delta_seconds) {
                candidates.push_back(Candidate{dist, g, p});
            }
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.dist != b.dist) {
            return a.dist < b.dist;
        }
        if (a.g != b.g) {
            return a.g < b.g;
        }
        return a.p < b.p;
    });
    std::vector<bool> gt_used(gt_starts.size(), false);
    std::vector<bool> pred_used(pred_starts.size(), false);
    std::size_t matched = 0;
    for (const Candidate& c : candidates) {
        if (gt_used[c.g] || pred_used[c.p]) {
            continue;
        }
        gt_used[c.g] = true;
        pred_used[c.p] = true;
        ++matched;
    }
    return PrecisionRecall{static_cast<double>(matched) / static_cast<double>(pred_starts.size()),
                           static_cast<double>(matched) / static_cast<double>(gt_starts.size())};
}

PrecisionRecall boundary_pr(const ChapterSet& pred, const ChapterSet& gt,
                            std::uint32_t delta_seconds) {
    const std::vector<Timestamp> ps = pred.starts();
    const std::vector<Timestamp> gs = gt.starts();
    return boundary_pr(ps, gs, delta_seconds);
}

PrecisionRecall segment_pr_at_iou(std::span<const Segment> pred, std::span<const Segment> gt,
                                  double tau) {
    const std::vector<MatchedPair> pairs = greedy_match(pred, gt);
    return pr_from_matches(pairs, pred.size(), gt.size(), tau);
}

PrecisionRecall segment_pr_at_iou(const ChapterSet& pred, const ChapterSet& gt, double tau) {
    const std::vector<Segment> ps = segments_of(pred);
    const std::vector<Segment> gs = segments_of(gt);
    return segment_pr_at_iou(ps, gs, tau);
}

namespace {

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

std::vector<std::string> tokenize_title(std::string_view title) {
    std::vector<std::string> tokens;
    std::size_t pos = 0;
    while (pos < title.size()) {
        while (pos < title.size() && std::isspace(static_cast<unsigned char>(title[pos]))) {
            ++pos;
        }
        std::size_t end = pos;
        while (end < title.size() && !std::isspace(static_cast<unsigned char>(title[end]))) {
            ++end;
        }
        if (end > pos) {
            tokens.push_back(ascii_lower(title.substr(pos, end - pos)));
        }
        pos = end;
    }
    return tokens;
}

// Token-level F1 of two token bags.
double token_bag_f1(const std::vector<std::string>& pred, const std::vector<std::string>& gt) {
    if (pred.empty() || gt.empty()) {
        return pred.empty() && gt.empty() ? 1.0 : 0.0;
    }
    std::unordered_map<std::string, std::size_t> gt_counts;
    for (const std::string& t : gt) {
        ++gt_counts[t];
    }
    std::size_t overlap = 0;
    for (const std::string& t : pred) {
        auto it = gt_counts.find(t);
        if (it != gt_counts.end() && it->second > 0) {
            --it->second;
            ++overlap;
        }
    }
    if (overlap == 0) {
        return 0.0;
    }
    const double precision = static_cast<double>(overlap) / static_cast<double>(pred.size());
    const double recall = static_cast<double>(overlap) / static_cast<double>(gt.size());
    return 2.0 * precision * recall / (precision + recall);
}

}  // namespace

double repetition_ratio(const ChapterSet& cs, bool case_insensitive) {
    std::unordered_set<std::string> unique;
    for (const Chapter& c : cs.chapters()) {
        unique.insert(case_insensitive ? ascii_lower(c.title) : c.title);
    }
    return static_cast<double>(unique.size()) / static_cast<double>(cs.size());
}

int count_delta(const ChapterSet& pred, const ChapterSet& gt) {
    return static_cast<int>(pred.size()) - static_cast<int>(gt.size());
}

double title_token_f1(const ChapterSet& pred, const ChapterSet& gt,
                      std::span<const MatchedPair> pairs) {
    if (pairs.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (const MatchedPair& pair : pairs) {
        sum += token_bag_f1(tokenize_title(pred.chapters()[pair.pred_index].title),
                            tokenize_title(gt.chapters()[pair.gt_index].title));
    }
    return sum / static_cast<double>(pairs.size());
}

MetricsReport compute_metrics(const ChapterSet& pred, const ChapterSet& gt,
                              const MetricsOptions& options) {
    const std::vector<Segment> ps = segments_of(pred);
    const std::vector<Segment> gs = segments_of(gt);
    const std::vector<MatchedPair> pairs = greedy_match(ps, gs, options.match_zero_overlap);

    MetricsReport report;
    double iou_sum = 0.0;
    for (const MatchedPair& pair : pairs) {
        iou_sum += pair.iou;
    }
    report.tiou = pairs.empty() ? 0.0 : 100.0 * iou_sum / static_cast<double>(pairs.size());
    report.f1 = f1(pred, gt);
    report.pr_at_3s = boundary_pr(pred, gt, 3);
    report.pr_at_5s = boundary_pr(pred, gt, 5);
    report.pr_at_iou_50 = pr_from_matches(pairs, ps.size(), gs.size(), 0.5);
    report.pr_at_iou_70 = pr_from_matches(pairs, ps.size(), gs.size(), 0.7);
    report.repetition_ratio = repetition_ratio(pred, options.title_case_insensitive);
    report.count_delta = count_delta(pred, gt);
    report.title_token_f1 = title_token_f1(pred, gt, pairs);
    return report;
}

MetricsReport empty_prediction_metrics(const ChapterSet& gt) {
    MetricsReport report;
    report.count_delta = -static_cast<int>(gt.size());
    report.empty_prediction = true;
    return report;
}

CorpusSummary aggregate_metrics(std::span<const MetricsReport> reports) {
    CorpusSummary summary;
    summary.videos = reports.size();
    if (reports.empty()) {
        return summary;
    }
    std::vector<int> deltas;
    deltas.reserve(reports.size());
    for (const MetricsReport& r : reports) {
        summary.tiou += r.tiou;
        summary.f1 += r.f1;
        summary.pr_at_3s.precision += r.pr_at_3s.precision;
        summary.pr_at_3s.recall += r.pr_at_3s.recall;
        summary.pr_at_5s.precision += r.pr_at_5s.precision;
        summary.pr_at_5s.recall += r.pr_at_5s.recall;
        summary.pr_at_iou_50.precision += r.pr_at_iou_50.precision;
        summary.pr_at_iou_50.recall += r.pr_at_iou_50.recall;
        summary.pr_at_iou_70.precision += r.pr_at_iou_70.precision;
        summary.pr_at_iou_70.recall += r.pr_at_iou_70.recall;
        summary.repetition_ratio += r.repetition_ratio;
        summary.count_delta_mean += r.count_delta;
        summary.title_token_f1 += r.title_token_f1;
        summary.empty_predictions += r.empty_prediction ? 1 : 0;
        deltas.push_back(r.count_delta);
    }
    const auto n = static_cast<double>(reports.size());
    summary.tiou /= n;
    summary.f1 /= n;
    summary.pr_at_3s.precision /= n;
    summary.pr_at_3s.recall /= n;
    summary.pr_at_5s.precision /= n;
    summary.pr_at_5s.recall /= n;
    summary.pr_at_iou_50.precision /= n;
    summary.pr_at_iou_50.recall /= n;
    summary.pr_at_iou_70.precision /= n;
    summary.pr_at_iou_70.recall /= n;
    summary.repetition_ratio /= n;
    summary.count_delta_mean /= n;
    summary.title_token_f1 /= n;

    std::sort(deltas.begin(), deltas.end());
    const std::size_t mid = deltas.size() / 2;
    summary.count_delta_median =
        deltas.size() % 2 == 1
            ? deltas[mid]
            : (static_cast<double>(deltas[mid - 1]) + static_cast<double>(deltas[mid])) / 2.0;
    return summary;
}

namespace {

nlohmann::ordered_json pr_json(const PrecisionRecall& pr) {
    return nlohmann::ordered_json{{"precision", pr.precision}, {"recall", pr.recall}};
}

}  // namespace

std::string to_json_string(const MetricsReport& report) {
    nlohmann::ordered_json j;
    if (!report.video_id.empty()) {
        j["video_id"] = report.video_id;
    }
    j["tiou"] = report.tiou;
    j["f1"] = report.f1;
    j["pr_at_seconds"] = {{"3", pr_json(report.pr_at_3s)}, {"5", pr_json(report.pr_at_5s)}};
    j["pr_at_iou"] = {{"0.5", pr_json(report.pr_at_iou_50)}, {"0.7", pr_json(report.pr_at_iou_70)}};
    j["repetition_ratio"] = report.repetition_ratio;
    j["count_delta"] = report.count_delta;
    j["title_token_f1"] = report.title_token_f1;
    if (report.empty_prediction) {
        j["empty_prediction"] = true;
    }
    return j.dump();
}

std::string to_json_string(const CorpusSummary& summary) {
    nlohmann::ordered_json j;
    j["videos"] = summary.videos;
    j["empty_predictions"] = summary.empty_predictions;
    j["tiou"] = summary.tiou;
    j["f1"] = summary.f1;
    j["pr_at_seconds"] = {{"3", pr_json(summary.pr_at_3s)}, {"5", pr_json(summary.pr_at_5s)}};
    j["pr_at_iou"] = {{"0.5", pr_json(summary.pr_at_iou_50)},
                      {"0.7", pr_json(summary.pr_at_iou_70)}};
    j["repetition_ratio"] = summary.repetition_ratio;
    j["count_delta_mean"] = summary.count_delta_mean;
    j["count_delta_median"] = summary.count_delta_median;
    j["title_token_f1"] = summary.title_token_f1;
    return j.dump();
}

}  // namespace chapterforge
