#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "chapterforge/errors.hpp"
#include "chapterforge/pipeline.hpp"
#include "chapterforge/synth.hpp"
#include "temp_dir.hpp"

using namespace chapterforge;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Prediction manifest pointing at the chaptering run's outputs.
fs::path prediction_manifest(const fs::path& gt_manifest, const fs::path& pred_dir,
                             const fs::path& out_path) {
    std::string text;
    for (const ManifestEntry& entry : load_manifest(gt_manifest)) {
        nlohmann::ordered_json j;
        j["video_id"] = entry.video_id;
        j["duration"] = entry.duration.seconds;
        const fs::path chapters = pred_dir / (entry.video_id + ".chapters.txt");
        j["chapters"] = fs::absolute(chapters).string();
        text += j.dump();
        text += '\n';
    }
    write_file_atomic(out_path, text);
    return out_path;
}

}  // namespace

TEST_CASE("mock pipeline over a marker corpus reproduces the ground truth files") {
    SynthConfig cfg;
    cfg.seed = 21;
    cfg.num_videos = 6;
    cfg.duration_min_seconds = 300;
    cfg.duration_max_seconds = 900;

    TempDir dir;
    const auto corpus = generate_corpus(cfg);
    const fs::path manifest = write_corpus(corpus, dir.path / "corpus");

    ChapterRunOptions options;
    options.manifest = manifest;
    options.out_dir = dir.path / "pred";
    options.jobs = 4;
    const MockBackend mock;
    const ChapterRunSummary summary = run_chapter(options, mock);
    CHECK(summary.failures == 0);
    REQUIRE(summary.videos.size() == 6);

    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const fs::path pred = dir.path / "pred" / (corpus[i].document.video_id() + ".chapters.txt");
        const fs::path gt = dir.path / "corpus" / "chapters" / (corpus[i].document.video_id() + ".txt");
        REQUIRE(fs::exists(pred));
        CHECK(slurp(pred) == slurp(gt));
        CHECK(fs::exists(dir.path / "pred" / (corpus[i].document.video_id() + ".report.json")));
    }
    CHECK(fs::exists(dir.path / "pred" / "run_report.json"));

    SUBCASE("evaluating the run against its ground truth scores perfectly") {
        EvalOptions eval;
        eval.gt_manifest = manifest;
        eval.pred_manifest =
            prediction_manifest(manifest, dir.path / "pred", dir.path / "pred_manifest.jsonl");
        eval.jobs = 4;
        const EvalResult result = run_eval(eval);
        CHECK(result.corpus.videos == 6);
        CHECK(result.corpus.tiou == doctest::Approx(100.0));
        CHECK(result.corpus.f1 == doctest::Approx(100.0));
        CHECK(result.corpus.count_delta_mean == doctest::Approx(0.0));
        CHECK(result.corpus.empty_predictions == 0);

        const std::string json_text = to_json_string(result);
        const auto parsed = nlohmann::json::parse(json_text);
        CHECK(parsed["videos"].size() == 6);
        CHECK(parsed["corpus"]["tiou"].get<double>() == doctest::Approx(100.0));
    }
}

TEST_CASE("reruns produce byte-identical outputs") {
    SynthConfig cfg;
    cfg.seed = 22;
    cfg.num_videos = 2;
    TempDir dir;
    const fs::path manifest = write_corpus(generate_corpus(cfg), dir.path / "corpus");

    const MockBackend mock;
    ChapterRunOptions options;
    options.manifest = manifest;
    for (const char* run : {"run1", "run2"}) {
        options.out_dir = dir.path / run;
        run_chapter(options, mock);
    }
    for (const auto& entry : fs::directory_iterator(dir.path / "run1")) {
        const fs::path rel = fs::relative(entry.path(), dir.path / "run1");
        CHECK(slurp(entry.path()) == slurp(dir.path / "run2" / rel));
    }
}

TEST_CASE("a video with no inputs fails with an empty transcript, others proceed") {
    SynthConfig cfg;
    cfg.seed = 23;
    cfg.num_videos = 1;
    TempDir dir;
    const fs::path manifest = write_corpus(generate_corpus(cfg), dir.path / "corpus");

    // Keep the patched manifest next to the original so relative paths resolve.
    std::string text = slurp(manifest);
    text += R"({"video_id": "no-inputs", "duration": 120, "asr": null, "captions": null, "chapters": null})"
            "\n";
    const fs::path patched = manifest.parent_path() / "patched.jsonl";
    write_file_atomic(patched, text);

    ChapterRunOptions options;
    options.manifest = patched;
    options.out_dir = dir.path / "pred";
    const MockBackend mock;
    const ChapterRunSummary summary = run_chapter(options, mock);
    CHECK(summary.failures == 1);
    REQUIRE(summary.videos.size() == 2);
    CHECK(summary.videos[0].ok);
    CHECK(!summary.videos[1].ok);
    CHECK(summary.videos[1].error.find("empty transcript") != std::string::npos);
}

TEST_CASE("two-stage mode splices captions at speech-predicted boundaries") {
    SynthConfig cfg;
    cfg.seed = 24;
    cfg.num_videos = 3;
    cfg.extra_captions = 6;
    TempDir dir;
    const auto corpus = generate_corpus(cfg);
    const fs::path manifest = write_corpus(corpus, dir.path / "corpus");

    ChapterRunOptions options;
    options.manifest = manifest;
    options.out_dir = dir.path / "pred";
    options.two_stage = true;
    const MockBackend mock;
    const ChapterRunSummary summary = run_chapter(options, mock);
    CHECK(summary.failures == 0);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        CHECK(summary.videos[i].planned_frames == corpus[i].ground_truth.size());
        CHECK(!summary.videos[i].report.used_fallback_frame_plan);
        CHECK(slurp(dir.path / "pred" / (corpus[i].document.video_id() + ".chapters.txt")) ==
              write_chapters(corpus[i].ground_truth));
    }
}

TEST_CASE("two-stage mode falls back to every-10s frames when speech is absent") {
    TempDir dir;
    // Captions only, every 10 s; two of them carry the oracle marker.
    std::string captions;
    for (int t = 0; t <= 90; t += 10) {
        std::string text = "a quiet scene " + std::to_string(t);
        if (t == 0) {
            text = std::string(kChapterMarker) + " Silent Open";
        }
        if (t == 50) {
            text = std::string(kChapterMarker) + " Silent Middle";
        }
        captions += "{\"time\": " + std::to_string(t) + ", \"text\": \"" + text + "\"}\n";
    }
    dir.file("captions.jsonl", captions);
    dir.file("manifest.jsonl",
             R"({"video_id": "silent", "duration": 95, "asr": null, "captions": "captions.jsonl", "chapters": null})"
             "\n");

    ChapterRunOptions options;
    options.manifest = dir.path / "manifest.jsonl";
    options.out_dir = dir.path / "pred";
    options.two_stage = true;
    const MockBackend mock;
    const ChapterRunSummary summary = run_chapter(options, mock);
    REQUIRE(summary.failures == 0);
    CHECK(summary.videos[0].report.used_fallback_frame_plan);
    CHECK(summary.videos[0].planned_frames == 10);  // 0,10,...,90
    CHECK(slurp(dir.path / "pred" / "silent.chapters.txt") ==
          "00:00:00 - Silent Open\n00:00:50 - Silent Middle\n");

    const std::string report = slurp(dir.path / "pred" / "silent.report.json");
    CHECK(report.find("\"used_fallback_frame_plan\":true") != std::string::npos);
}

TEST_CASE("eval rejects mismatched manifest id sets, naming the strays") {
    TempDir dir;
    dir.file("gt.txt", "00:00:00 - A\n");
    dir.file("gt_manifest.jsonl",
             R"({"video_id": "a", "duration": 60, "chapters": "gt.txt"})" "\n"
             R"({"video_id": "b", "duration": 60, "chapters": "gt.txt"})" "\n");
    dir.file("pred_manifest.jsonl",
             R"({"video_id": "a", "duration": 60, "chapters": "gt.txt"})" "\n"
             R"({"video_id": "c", "duration": 60, "chapters": "gt.txt"})" "\n");
    EvalOptions options;
    options.gt_manifest = dir.path / "gt_manifest.jsonl";
    options.pred_manifest = dir.path / "pred_manifest.jsonl";
    try {
        run_eval(options);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        const std::string what = e.what();
        CHECK(what.find("b") != std::string::npos);
        CHECK(what.find("c") != std::string::npos);
    }
}

TEST_CASE("an unparseable prediction scores as empty instead of aborting") {
    TempDir dir;
    dir.file("gt.txt", "00:00:00 - A\n00:00:30 - B\n");
    dir.file("bad.txt", "complete nonsense\n");
    dir.file("gt_manifest.jsonl",
             R"({"video_id": "v", "duration": 60, "chapters": "gt.txt"})" "\n");
    dir.file("pred_manifest.jsonl",
             R"({"video_id": "v", "duration": 60, "chapters": "bad.txt"})" "\n");
    EvalOptions options;
    options.gt_manifest = dir.path / "gt_manifest.jsonl";
    options.pred_manifest = dir.path / "pred_manifest.jsonl";
    const EvalResult result = run_eval(options);
    REQUIRE(result.videos.size() == 1);
    CHECK(result.videos[0].empty_prediction);
    CHECK(result.videos[0].tiou == 0.0);
    CHECK(result.corpus.empty_predictions == 1);
}

TEST_CASE("eval_pair scores two files directly") {
    TempDir dir;
    const auto gt = dir.file("gt.txt", "00:00:00 - A\n00:00:30 - B\n");
    const auto same = dir.file("pred.txt", "00:00:00 - A\n00:00:30 - B\n");
    const MetricsReport report = eval_pair(same, gt, Timestamp{60});
    CHECK(report.tiou == doctest::Approx(100.0));
    CHECK(report.f1 == doctest::Approx(100.0));
}

#ifdef CHAPTERFORGE_CLI_PATH
TEST_CASE("the installed CLI wires the pipeline end to end") {
    TempDir dir;
    const std::string cli = CHAPTERFORGE_CLI_PATH;
    const std::string corpus = (dir.path / "corpus").string();
    const std::string pred = (dir.path / "pred").string();

    const auto run = [&dir](const std::string& command) {
        const std::string full = command + " > " + (dir.path / "stdout.txt").string() + " 2> " +
                                 (dir.path / "stderr.txt").string();
        return std::system(full.c_str());
    };

    REQUIRE(run(cli + " synth --out " + corpus + " --seed 7 --num-videos 2 --duration-min 300"
                    " --duration-max 400") == 0);
    REQUIRE(run(cli + " chapter --manifest " + corpus + "/manifest.jsonl --out " + pred +
                " --backend mock --jobs 2") == 0);

    // Evaluate the predictions against the corpus ground truth.
    prediction_manifest(dir.path / "corpus" / "manifest.jsonl", dir.path / "pred",
                        dir.path / "pred_manifest.jsonl");
    REQUIRE(run(cli + " eval --pred-manifest " + (dir.path / "pred_manifest.jsonl").string() +
                " --gt-manifest " + corpus + "/manifest.jsonl") == 0);
    const auto eval_json = nlohmann::json::parse(slurp(dir.path / "stdout.txt"));
    CHECK(eval_json["corpus"]["tiou"].get<double>() == doctest::Approx(100.0));

    // Prompt dump starts with the instruction template.
    REQUIRE(run(cli + " prompt --manifest " + corpus + "/manifest.jsonl --video-id synth-0001") == 0);
    const std::string prompt = slurp(dir.path / "stdout.txt");
    CHECK(prompt.rfind("Given the complete transcript of a video of duration ", 0) == 0);

    // Frame plans emit JSONL.
    REQUIRE(run(cli + " select-frames --strategy every-k --duration 95 --k 10") == 0);
    const std::string plan = slurp(dir.path / "stdout.txt");
    CHECK(plan.rfind("{\"time\": 0}", 0) == 0);

    // Usage errors exit with 2.
    CHECK(run(cli + " eval") != 0);
    CHECK(WEXITSTATUS(run(cli + " eval")) == 2);
    CHECK(WEXITSTATUS(run(cli + " chapter --manifest missing.jsonl")) == 2);  // missing --out
}
#endif
