#include <benchmark/benchmark.h>

#include <random>
#include <set>

#include "chapterforge/metrics.hpp"

using namespace chapterforge;

namespace {

ChapterSet random_set(std::mt19937_64& rng, std::uint32_t duration, std::size_t count) {
    std::set<std::uint32_t> starts;
    while (starts.size() < count) {
        starts.insert(rng() % duration);
    }
    std::vector<Chapter> chapters;
    std::size_t i = 0;
    for (const std::uint32_t s : starts) {
        chapters.emplace_back(Timestamp{s}, "chapter " + std::to_string(i++));
    }
    return ChapterSet::create(std::move(chapters), Timestamp{duration});
}

}  // namespace

static void BM_greedy_match(benchmark::State& state) {
    std::mt19937_64 rng(1);
    const auto count = static_cast<std::size_t>(state.range(0));
    const auto pred = segments_of(random_set(rng, 36000, count));
    const auto gt = segments_of(random_set(rng, 36000, count));
    for (auto _ : state) {
        benchmark::DoNotOptimize(greedy_match(pred, gt));
    }
}
BENCHMARK(BM_greedy_match)->Arg(8)->Arg(13)->Arg(100);

static void BM_f1(benchmark::State& state) {
    std::mt19937_64 rng(2);
    const auto count = static_cast<std::size_t>(state.range(0));
    const auto pred = random_set(rng, 36000, count);
    const auto gt = random_set(rng, 36000, count);
    for (auto _ : state) {
        benchmark::DoNotOptimize(f1(pred, gt));
    }
}
BENCHMARK(BM_f1)->Arg(8)->Arg(13);

static void BM_compute_metrics(benchmark::State& state) {
    std::mt19937_64 rng(3);
    const auto pred = random_set(rng, 36000, 13);
    const auto gt = random_set(rng, 36000, 12);
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_metrics(pred, gt));
    }
}
BENCHMARK(BM_compute_metrics);

BENCHMARK_MAIN();
