#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "oadeval/ranking.hpp"
#include "oadeval/streaming_accuracy.hpp"
#include "oadeval/timeline.hpp"

using namespace oadeval;

namespace {

std::vector<LabeledInterval> make_intervals(std::mt19937_64& rng, double duration,
                                            int count, bool scored) {
    std::vector<LabeledInterval> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double start =
            static_cast<double>(rng() >> 11) * 0x1.0p-53 * (duration - 60.0);
        const double length = 1.0 + static_cast<double>(rng() % 44);
        out.push_back({{start, start + length}, static_cast<ClassId>(1 + rng() % 5),
                       scored ? std::optional<double>(0.5) : std::nullopt});
    }
    return out;
}

}  // namespace

static void BM_AdvanceFold(benchmark::State& state) {
    std::mt19937_64 rng(1);
    std::vector<SlotOutcome> outcomes(static_cast<std::size_t>(state.range(0)));
    static constexpr SlotOutcome kAll[] = {
        SlotOutcome::TruePositive, SlotOutcome::TrueNegative,
        SlotOutcome::FalsePositive, SlotOutcome::FalseNegative};
    for (auto& o : outcomes) o = kAll[rng() % 4];

    for (auto _ : state) {
        EvaluatorState fold;
        double sum = 0.0;
        for (const auto o : outcomes) {
            fold = advance(fold, o);
            sum += ia_at(fold);
        }
        benchmark::DoNotOptimize(sum);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AdvanceFold)->Arg(7200)->Arg(72000);

static void BM_Rasterize(benchmark::State& state) {
    std::mt19937_64 rng(2);
    const SlotGrid grid(3600.0, 0.5);
    const auto intervals = make_intervals(rng, 3600.0, static_cast<int>(state.range(0)),
                                          false);
    for (auto _ : state) {
        auto labeling = rasterize(intervals, grid, 5);
        benchmark::DoNotOptimize(labeling.labels.data());
    }
    state.SetItemsProcessed(state.iterations() * grid.slot_count());
}
BENCHMARK(BM_Rasterize)->Arg(10)->Arg(100);

static void BM_EvaluateOneHourVideo(benchmark::State& state) {
    std::mt19937_64 rng(3);
    const SlotGrid grid(3600.0, 0.5);
    const auto gt = make_intervals(rng, 3600.0, 8, false);
    const auto det = make_intervals(rng, 3600.0, 8, true);
    for (auto _ : state) {
        const auto avg = evaluate_intervals_average(gt, det, grid, 5);
        benchmark::DoNotOptimize(avg.avg_ia);
    }
    state.SetItemsProcessed(state.iterations() * grid.slot_count());
}
BENCHMARK(BM_EvaluateOneHourVideo);

static void BM_AveragePrecision(benchmark::State& state) {
    std::mt19937_64 rng(4);
    std::vector<ScoredSlot> table(static_cast<std::size_t>(state.range(0)));
    for (auto& e : table) {
        e.score = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        e.positive = (rng() & 1) != 0;
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(average_precision(table));
        benchmark::DoNotOptimize(calibrated_average_precision(table));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AveragePrecision)->Arg(7200)->Arg(72000);

BENCHMARK_MAIN();
