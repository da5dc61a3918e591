#include <algorithm>
#include <random>

#include "doctest.h"
#include "oadeval/streaming_accuracy.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace oadeval;

namespace {

// The worked 10-slot example used throughout: ground-truth action on [3, 7),
// detection on [4, 8), delta_t = 1. Slot outcomes: TN TN TN FN TP TP TP FP TN TN.
MetricSeries worked_example_series() {
    const SlotGrid grid(10.0, 1.0);
    const std::vector<LabeledInterval> gt{{{3.0, 7.0}, 1, std::nullopt}};
    const std::vector<LabeledInterval> det{{{4.0, 8.0}, 1, 0.9}};
    return evaluate_intervals(gt, det, grid, 1, {1.0, true}, "worked");
}

std::vector<SlotOutcome> random_outcomes(std::mt19937_64& rng, std::size_t n) {
    static constexpr SlotOutcome kAll[] = {
        SlotOutcome::TruePositive, SlotOutcome::TrueNegative,
        SlotOutcome::FalsePositive, SlotOutcome::FalseNegative};
    std::vector<SlotOutcome> out(n);
    for (auto& o : out) o = kAll[rng() % 4];
    return out;
}

}  // namespace

TEST_CASE("advance folds one outcome at a time") {
    EvaluatorState state;

    const auto after_tp = advance(state, SlotOutcome::TruePositive);
    CHECK(after_tp.slots_seen == 1);
    CHECK(after_tp.tp_sum == 1);
    CHECK(after_tp.tn_sum == 0);
    CHECK(after_tp.gt_action_slots == 1);
    CHECK(after_tp.gt_background_slots == 0);

    const auto after_fp = advance(state, SlotOutcome::FalsePositive);
    CHECK(after_fp.slots_seen == 1);
    CHECK(after_fp.tp_sum == 0);
    CHECK(after_fp.tn_sum == 0);
    CHECK(after_fp.gt_action_slots == 0);
    CHECK(after_fp.gt_background_slots == 1);

    const auto two = advance(after_tp, SlotOutcome::TrueNegative);
    CHECK(two.slots_seen == 2);
    CHECK(two.tp_sum == 1);
    CHECK(two.tn_sum == 1);
    CHECK(two.gt_action_slots == 1);
    CHECK(two.gt_background_slots == 1);
}

TEST_CASE("ia_at reads out the fold") {
    CHECK(ia_at({10, 3, 5, 4, 6}) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(ia_at({7, 0, 7, 0, 7}) == 1.0);  // all-background video, silent predictor
    CHECK(ia_at({4, 0, 0, 2, 2}) == 0.0);  // every slot wrong
    CHECK_THROWS_AS(ia_at({}), std::domain_error);
}

TEST_CASE("weighted_ia_at rescales the true factors") {
    // tp=3 fn=1 tn=5 fp=1: gt_action=4, gt_background=6, w=1.5
    const EvaluatorState state{10, 3, 5, 4, 6};
    CHECK(weighted_ia_at(state) == doctest::Approx(9.5 / 12.0).epsilon(1e-12));

    // a perfect predictor saturates exactly, whatever the imbalance
    CHECK(weighted_ia_at({10, 4, 6, 4, 6}) == 1.0);
    CHECK(weighted_ia_at({100, 1, 99, 1, 99}) == 1.0);

    // no action observed yet: falls back to the unweighted value
    CHECK(weighted_ia_at({5, 0, 5, 0, 5}) == 1.0);
    CHECK(weighted_ia_at({5, 0, 3, 0, 5}) == doctest::Approx(0.6).epsilon(1e-12));
    // no background observed: same fallback
    CHECK(weighted_ia_at({5, 3, 0, 5, 0}) == doctest::Approx(0.6).epsilon(1e-12));

    CHECK_THROWS_AS(weighted_ia_at({}), std::domain_error);
}

TEST_CASE("weighted equals unweighted when the classes balance") {
    std::mt19937_64 rng(99);
    for (int round = 0; round < 1000; ++round) {
        EvaluatorState state;
        const auto outcomes = random_outcomes(rng, 1 + rng() % 64);
        for (const auto o : outcomes) state = advance(state, o);
        if (state.gt_action_slots == state.gt_background_slots ||
            state.gt_action_slots == 0 || state.gt_background_slots == 0)
            CHECK(weighted_ia_at(state) == ia_at(state));
    }
}

TEST_CASE("evaluate_video on agreeing all-background labelings") {
    const SlotGrid grid(10.0, 0.5);
    const DenseLabeling blank{grid, std::vector<ClassId>(20, kBackgroundClass)};
    const auto series = evaluate_video(blank, blank, {0.5, true}, "v");
    REQUIRE(series.points.size() == 20);
    for (const auto& p : series.points) {
        CHECK(p.ia == 1.0);
        CHECK(p.weighted_ia == 1.0);
    }
}

TEST_CASE("evaluate_video rejects mismatched grids and configs") {
    const DenseLabeling a{SlotGrid(10.0, 0.5), std::vector<ClassId>(20, 0)};
    const DenseLabeling b{SlotGrid(12.0, 0.5), std::vector<ClassId>(24, 0)};
    CHECK_THROWS_AS(evaluate_video(a, b, {0.5, true}), std::invalid_argument);
    CHECK_THROWS_AS(evaluate_video(a, a, {1.0, true}), std::invalid_argument);
}

TEST_CASE("the worked example reproduces its hand-derived values") {
    const auto series = worked_example_series();
    REQUIRE(series.points.size() == 10);

    CHECK(series.points[4].t_prime == 5.0);
    CHECK(series.points[4].ia == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(series.points[9].ia == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(series.points[9].weighted_ia == doctest::Approx(9.5 / 12.0).epsilon(1e-12));
    CHECK(series.points[4].weighted_ia == doctest::Approx(0.75).epsilon(1e-12));

    const auto avg = series_average(series);
    CHECK(avg.avg_ia == doctest::Approx(0.8568253968253968).epsilon(1e-12));
}

TEST_CASE("maia averages per-video averages") {
    const SlotGrid grid(4.0, 1.0);
    const EvaluatorConfig config{1.0, true};

    SUBCASE("constant-one series") {
        const DenseLabeling blank{grid, {0, 0, 0, 0}};
        const std::vector series{evaluate_video(blank, blank, config, "v")};
        const auto summary = maia(series);
        CHECK(summary.maia == 1.0);
        CHECK(summary.weighted_maia == 1.0);
        CHECK(summary.video_count == 1);
    }

    SUBCASE("two videos average arithmetically") {
        MetricSeries a{"a", config, {{1.0, 0.9, 0.9}, {2.0, 0.7, 0.7}}, 2.0};
        MetricSeries b{"b", config, {{1.0, 0.6, 0.6}, {2.0, 0.6, 0.6}}, 2.0};
        const std::vector series{a, b};
        const auto summary = maia(series);
        CHECK(summary.maia == doctest::Approx(0.7).epsilon(1e-12));
        CHECK(summary.per_video[0].video_id == "a");
        CHECK(summary.per_video[0].avg_ia == doctest::Approx(0.8).epsilon(1e-12));
    }

    SUBCASE("empty input is rejected") {
        CHECK_THROWS_AS(maia({}), std::invalid_argument);
        const MetricSeries empty{"e", config, {}, 4.0};
        const std::vector series{empty};
        CHECK_THROWS_AS(maia(series), std::invalid_argument);
    }
}

TEST_CASE("streaming fold equals brute-force recomputation at every prefix") {
    std::mt19937_64 rng(31337);
    for (int round = 0; round < 50; ++round) {
        const auto outcomes = random_outcomes(rng, 1 + rng() % 300);
        EvaluatorState state;
        for (std::size_t k = 0; k < outcomes.size(); ++k) {
            state = advance(state, outcomes[k]);
            CHECK(ia_at(state) ==
                  doctest::Approx(testing::recount_ia(outcomes, k + 1)).epsilon(1e-12));
            CHECK(weighted_ia_at(state) ==
                  doctest::Approx(testing::recount_weighted_ia(outcomes, k + 1))
                      .epsilon(1e-12));
        }
    }
}

TEST_CASE("accuracies stay inside [0, 1] on every reachable state") {
    std::mt19937_64 rng(555);
    for (int round = 0; round < 500; ++round) {
        EvaluatorState state;
        for (const auto o : random_outcomes(rng, 1 + rng() % 200)) {
            state = advance(state, o);
            const double ia = ia_at(state);
            const double weighted = weighted_ia_at(state);
            CHECK(ia >= 0.0);
            CHECK(ia <= 1.0);
            CHECK(weighted >= 0.0);
            CHECK(weighted <= 1.0);
        }
    }
}

TEST_CASE("counters are monotone and slots_seen increments by one") {
    std::mt19937_64 rng(808);
    EvaluatorState state;
    for (const auto o : random_outcomes(rng, 500)) {
        const auto next = advance(state, o);
        CHECK(next.slots_seen == state.slots_seen + 1);
        CHECK(next.tp_sum >= state.tp_sum);
        CHECK(next.tn_sum >= state.tn_sum);
        CHECK(next.gt_action_slots >= state.gt_action_slots);
        CHECK(next.gt_background_slots >= state.gt_background_slots);
        CHECK(next.gt_action_slots + next.gt_background_slots == next.slots_seen);
        CHECK(next.tp_sum <= next.gt_action_slots);
        CHECK(next.tn_sum <= next.gt_background_slots);
        state = next;
    }
}

TEST_CASE("prefix accuracy is order sensitive, the final value is not") {
    std::vector<SlotOutcome> outcomes{SlotOutcome::TruePositive, SlotOutcome::FalseNegative,
                                      SlotOutcome::TrueNegative, SlotOutcome::FalsePositive};

    // intermediate values differ under a permutation
    EvaluatorState forward;
    forward = advance(forward, outcomes[0]);
    EvaluatorState swapped;
    swapped = advance(swapped, outcomes[1]);
    CHECK(ia_at(forward) != ia_at(swapped));

    // the final value only sees the multiset
    std::mt19937_64 rng(2024);
    auto shuffled = outcomes;
    for (int round = 0; round < 20; ++round) {
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        EvaluatorState a;
        EvaluatorState b;
        for (const auto o : outcomes) a = advance(a, o);
        for (const auto o : shuffled) b = advance(b, o);
        CHECK(ia_at(a) == ia_at(b));
        CHECK(weighted_ia_at(a) == weighted_ia_at(b));
    }
}

TEST_CASE("weighted accuracy agrees with its balanced-accuracy identity") {
    // (w*tp + tn) / (w*a + b) with w = b/a is algebraically (tp/a + tn/b) / 2
    std::mt19937_64 rng(616);
    for (int round = 0; round < 400; ++round) {
        EvaluatorState state;
        for (const auto o : random_outcomes(rng, 1 + rng() % 100))
            state = advance(state, o);
        if (state.gt_action_slots == 0 || state.gt_background_slots == 0) continue;
        const double balanced =
            0.5 * (static_cast<double>(state.tp_sum) / state.gt_action_slots +
                   static_cast<double>(state.tn_sum) / state.gt_background_slots);
        CHECK(weighted_ia_at(state) == doctest::Approx(balanced).epsilon(1e-12));
    }
}

TEST_CASE("interval-fed evaluation matches the dense-labeling route") {
    std::mt19937_64 rng(123456);
    for (int round = 0; round < 60; ++round) {
        testing::CorpusParams params;
        params.min_videos = 1;
        params.max_videos = 3;
        const auto corpus = testing::random_corpus(rng, params);
        auto detections = testing::random_detections(rng, corpus, 8);

        const EvaluatorConfig config{0.5, true};
        for (const auto& meta : corpus.videos) {
            SlotGrid grid(meta.duration, config.delta_t);
            const auto gt_spans = corpus.annotations_for(meta.video_id);
            const auto det_it = detections.find(meta.video_id);
            const std::span<const LabeledInterval> det_spans =
                det_it == detections.end() ? std::span<const LabeledInterval>{}
                                           : std::span<const LabeledInterval>(det_it->second);

            const auto dense = evaluate_video(
                rasterize(gt_spans, grid, params.class_count),
                rasterize(det_spans, grid, params.class_count), config, meta.video_id);
            const auto fused = evaluate_intervals(gt_spans, det_spans, grid,
                                                  params.class_count, config,
                                                  meta.video_id);
            REQUIRE(dense.points.size() == fused.points.size());
            for (std::size_t k = 0; k < dense.points.size(); ++k) {
                CHECK(dense.points[k].ia == fused.points[k].ia);
                CHECK(dense.points[k].weighted_ia == fused.points[k].weighted_ia);
            }

            const auto avg = evaluate_intervals_average(gt_spans, det_spans, grid,
                                                        params.class_count, meta.video_id);
            const auto dense_avg = series_average(dense);
            CHECK(avg.avg_ia == dense_avg.avg_ia);
            CHECK(avg.avg_weighted_ia == dense_avg.avg_weighted_ia);
        }
    }
}
