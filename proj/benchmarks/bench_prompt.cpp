#include <benchmark/benchmark.h>

#include "chapterforge/generate.hpp"
#include "chapterforge/prompt.hpp"
#include "chapterforge/synth.hpp"

using namespace chapterforge;

namespace {

VideoDocument ninety_minute_document() {
    SynthConfig cfg;
    cfg.seed = 7;
    cfg.num_videos = 1;
    cfg.duration_min_seconds = 5400;
    cfg.duration_max_seconds = 5400;
    cfg.chapters_min = 10;
    cfg.chapters_max = 13;
    return generate_corpus(cfg)[0].document;
}

}  // namespace

static void BM_build_transcript(benchmark::State& state) {
    const VideoDocument doc = ninety_minute_document();
    const PromptOptions opts = PromptOptions::defaults();
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_transcript(doc, opts));
    }
}
BENCHMARK(BM_build_transcript);

static void BM_partition_windows(benchmark::State& state) {
    const VideoDocument doc = ninety_minute_document();
    const auto lines = build_transcript(doc, PromptOptions::defaults());
    for (auto _ : state) {
        benchmark::DoNotOptimize(partition_windows(lines, 15000));
    }
}
BENCHMARK(BM_partition_windows);

static void BM_mock_generate(benchmark::State& state) {
    const VideoDocument doc = ninety_minute_document();
    const auto lines = build_transcript(doc, PromptOptions::defaults());
    const GeneratorRequest request{
        build_prompt(doc, transcript_text(lines), PromptOptions::defaults())};
    const MockBackend mock;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mock.generate(request));
    }
}
BENCHMARK(BM_mock_generate);
