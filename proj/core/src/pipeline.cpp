#include "chapterforge/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <thread>

#include <nlohmann/json.hpp>

#include "chapterforge/errors.hpp"
#include "chapterforge/frame_select.hpp"

namespace chapterforge {

namespace {

std::size_t effective_jobs(std::size_t requested, std::size_t work_items) {
    std::size_t jobs = requested != 0 ? requested : std::thread::hardware_concurrency();
    if (jobs == 0) {
        jobs = 1;
    }
    return std::min(jobs, std::max<std::size_t>(work_items, 1));
}

// Runs fn(i) for i in [0, count) on up to `jobs` threads. The first exception
// thrown by any invocation is rethrown on the calling thread after the pool
// drains.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
    if (count == 0) {
        return;
    }
    if (jobs <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (std::size_t t = 0; t < jobs; ++t) {
        workers.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) {
                    return;
                }
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (std::thread& worker : workers) {
        worker.join();
    }
    for (const std::exception_ptr& error : errors) {
        if (error) {
            std::rethrow_exception(error);
        }
    }
}

// Keeps speech untouched and restricts captions to the planned timestamps.
VideoDocument splice_captions(const VideoDocument& doc, const FramePlan& plan) {
    std::vector<TimedUtterance> spliced;
    spliced.reserve(doc.utterances().size());
    for (const TimedUtterance& u : doc.utterances()) {
        if (u.modality == Modality::caption &&
            !std::binary_search(plan.timestamps.begin(), plan.timestamps.end(), u.start)) {
            continue;
        }
        spliced.push_back(u);
    }
    return VideoDocument::create(doc.video_id(), doc.duration(), std::move(spliced));
}

VideoOutcome process_video(const ManifestEntry& entry, const ChapterRunOptions& options,
                           const GeneratorBackend& backend) {
    VideoOutcome outcome;
    outcome.video_id = entry.video_id;
    outcome.duration_seconds = entry.duration.seconds;
    try {
        VideoDocument doc = load_document(entry).document;

        WindowingConfig windowing;
        windowing.window_tokens = options.config.window_tokens;

        if (options.two_stage) {
            FramePlan plan;
            if (doc.has_speech()) {
                const PromptOptions stage1 = PromptOptions::defaults(true, false);
                plan = select_from_boundaries(chapter_video(doc, stage1, backend, windowing).chapters);
            } else {
                plan = select_no_speech_fallback(doc);
                outcome.report.used_fallback_frame_plan = true;
            }
            outcome.planned_frames = plan.timestamps.size();
            doc = splice_captions(doc, plan);
        }

        ChapterRunResult result = chapter_video(doc, options.config.prompt, backend, windowing);
        const bool fallback = outcome.report.used_fallback_frame_plan;
        outcome.report = std::move(result.report);
        outcome.report.used_fallback_frame_plan = fallback;

        outcome.chapters_path = options.out_dir / (entry.video_id + ".chapters.txt");
        write_file_atomic(outcome.chapters_path, write_chapters(result.chapters));
        write_file_atomic(options.out_dir / (entry.video_id + ".report.json"),
                          to_json_string(outcome.report) + "\n");
        outcome.ok = true;
    } catch (const std::exception& e) {
        outcome.ok = false;
        outcome.error = e.what();
    }
    return outcome;
}

}  // namespace

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path tmp = path.parent_path() / (".tmp-" + path.filename().string());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot create " + tmp.string());
        }
        out << contents;
        out.flush();
        if (!out.good()) {
            throw IoError("write failure on " + tmp.string());
        }
    }
    fs::rename(tmp, path);
}

ChapterRunSummary run_chapter(const ChapterRunOptions& options, const GeneratorBackend& backend) {
    const std::vector<ManifestEntry> entries = load_manifest(options.manifest);
    std::filesystem::create_directories(options.out_dir);

    ChapterRunSummary summary;
    summary.videos.resize(entries.size());
    parallel_for(entries.size(), effective_jobs(options.jobs, entries.size()),
                 [&](std::size_t i) { summary.videos[i] = process_video(entries[i], options, backend); });

    nlohmann::ordered_json corpus;
    corpus["videos"] = nlohmann::ordered_json::array();
    for (const VideoOutcome& outcome : summary.videos) {
        if (!outcome.ok) {
            ++summary.failures;
        }
        nlohmann::ordered_json v;
        v["video_id"] = outcome.video_id;
        v["ok"] = outcome.ok;
        if (!outcome.ok) {
            v["error"] = outcome.error;
        } else {
            v["chapters"] = outcome.chapters_path.filename().string();
            v["windows"] = outcome.report.windows.size();
            v["transcript_tokens"] = outcome.report.total_transcript_tokens;
            if (outcome.duration_seconds > 0) {
                v["tokens_per_minute"] = 60.0 *
                                         static_cast<double>(outcome.report.total_transcript_tokens) /
                                         static_cast<double>(outcome.duration_seconds);
            }
            if (options.two_stage) {
                v["planned_frames"] = outcome.planned_frames;
                v["fallback_frame_plan"] = outcome.report.used_fallback_frame_plan;
            }
        }
        corpus["videos"].push_back(std::move(v));
    }
    corpus["failures"] = summary.failures;
    write_file_atomic(options.out_dir / "run_report.json", corpus.dump(2) + "\n");
    return summary;
}

MetricsReport eval_pair(const std::filesystem::path& pred_path,
                        const std::filesystem::path& gt_path, Timestamp duration,
                        const MetricsOptions& metrics) {
    const ChapterSet gt = load_chapters(gt_path, duration);
    MetricsReport report;
    try {
        const ChapterSet pred = load_chapters(pred_path, duration);
        report = compute_metrics(pred, gt, metrics);
    } catch (const Error&) {
        report = empty_prediction_metrics(gt);
    }
    return report;
}

EvalResult run_eval(const EvalOptions& options) {
    const std::vector<ManifestEntry> gt_entries = load_manifest(options.gt_manifest);
    const std::vector<ManifestEntry> pred_entries = load_manifest(options.pred_manifest);

    std::map<std::string, const ManifestEntry*> pred_by_id;
    for (const ManifestEntry& e : pred_entries) {
        pred_by_id[e.video_id] = &e;
    }
    std::map<std::string, const ManifestEntry*> gt_by_id;
    for (const ManifestEntry& e : gt_entries) {
        gt_by_id[e.video_id] = &e;
    }

    std::string missing;
    for (const ManifestEntry& e : gt_entries) {
        if (pred_by_id.count(e.video_id) == 0) {
            missing += " " + e.video_id + " (missing from predictions)";
        }
    }
    for (const ManifestEntry& e : pred_entries) {
        if (gt_by_id.count(e.video_id) == 0) {
            missing += " " + e.video_id + " (missing from ground truth)";
        }
    }
    if (!missing.empty()) {
        throw ValidationError("manifest video ids do not match:" + missing);
    }

    EvalResult result;
    result.videos.resize(gt_entries.size());
    parallel_for(gt_entries.size(), effective_jobs(options.jobs, gt_entries.size()),
                 [&](std::size_t i) {
                     const ManifestEntry& gt_entry = gt_entries[i];
                     const ManifestEntry& pred_entry = *pred_by_id.at(gt_entry.video_id);
                     if (!gt_entry.chapters) {
                         throw ValidationError("ground-truth manifest entry '" + gt_entry.video_id +
                                               "' has no chapters path");
                     }
                     const ChapterSet gt = load_chapters(*gt_entry.chapters, gt_entry.duration);
                     MetricsReport report;
                     if (!pred_entry.chapters) {
                         report = empty_prediction_metrics(gt);
                     } else {
                         try {
                             const ChapterSet pred =
                                 load_chapters(*pred_entry.chapters, gt_entry.duration);
                             report = compute_metrics(pred, gt, options.metrics);
                         } catch (const Error&) {
                             report = empty_prediction_metrics(gt);
                         }
                     }
                     report.video_id = gt_entry.video_id;
                     result.videos[i] = std::move(report);
                 });
    result.corpus = aggregate_metrics(result.videos);
    return result;
}

std::string to_json_string(const EvalResult& result) {
    nlohmann::ordered_json j;
    j["videos"] = nlohmann::ordered_json::array();
    for (const MetricsReport& report : result.videos) {
        j["videos"].push_back(nlohmann::ordered_json::parse(to_json_string(report)));
    }
    j["corpus"] = nlohmann::ordered_json::parse(to_json_string(result.corpus));
    return j.dump(2);
}

}  // namespace chapterforge
