#pragma once

#include <span>
#include <string>
#include <vector>

#include "oadeval/timeline.hpp"

namespace oadeval {

struct EvaluatorConfig {
    double delta_t = 0.5;
    bool weighted = true;  // selects the headline column; both are always computed
};

/// Running confusion counts over the slots observed so far. Counters are
/// exact integers; divisions happen only at read-out, so the streaming fold
/// matches a from-scratch recomputation bit for bit.
struct EvaluatorState {
    std::int64_t slots_seen = 0;  // the slot population after the last advance
    std::int64_t tp_sum = 0;
    std::int64_t tn_sum = 0;
    std::int64_t gt_action_slots = 0;
    std::int64_t gt_background_slots = 0;
};

/// Folds one more slot outcome into the state.
EvaluatorState advance(EvaluatorState state, SlotOutcome outcome);

/// Slot-level accuracy (tp + tn) / slots_seen over everything observed so
/// far. Undefined before one full slot has elapsed.
double ia_at(const EvaluatorState& state);

/// Accuracy with the true factors rescaled by the background-to-action ratio
/// observed so far in the ground truth:
///   (w * tp + tn) / (w * gt_action + gt_background),  w = gt_background / gt_action.
/// Falls back to the unweighted value while only one ground-truth class has
/// been seen, where there is no imbalance to correct.
double weighted_ia_at(const EvaluatorState& state);

struct MetricPoint {
    double t_prime = 0.0;  // slots_seen * delta_t
    double ia = 0.0;
    double weighted_ia = 0.0;
};

struct MetricSeries {
    std::string video_id;
    EvaluatorConfig config;
    std::vector<MetricPoint> points;  // one per elapsed slot, uniform delta_t spacing
    double video_duration = 0.0;
};

/// Single-pass fold over two dense labelings sharing one grid; yields one
/// point per slot at t' = delta_t, 2*delta_t, ....
MetricSeries evaluate_video(const DenseLabeling& gt, const DenseLabeling& pred,
                            const EvaluatorConfig& config, std::string video_id = {});

/// The same fold fed straight from interval lists through slot cursors; no
/// dense label vectors are materialized.
MetricSeries evaluate_intervals(std::span<const LabeledInterval> gt,
                                std::span<const LabeledInterval> detections,
                                const SlotGrid& grid, ClassId class_count,
                                const EvaluatorConfig& config, std::string video_id = {});

struct VideoAverage {
    std::string video_id;
    double avg_ia = 0.0;
    double avg_weighted_ia = 0.0;
};

struct DatasetSummary {
    std::vector<VideoAverage> per_video;  // input order
    double maia = 0.0;
    double weighted_maia = 0.0;
    std::int64_t video_count = 0;
};

/// Per-video time average (delta_t / T) * sum of the accuracies, with T the
/// evaluable duration; equal to the plain mean of the points.
VideoAverage series_average(const MetricSeries& series);

/// Interval-fed fold that keeps only the running sums needed for the video
/// average; memory stays constant no matter how long the video is.
VideoAverage evaluate_intervals_average(std::span<const LabeledInterval> gt,
                                        std::span<const LabeledInterval> detections,
                                        const SlotGrid& grid, ClassId class_count,
                                        std::string video_id = {});

/// Mean of the per-video averages over a non-empty corpus, for the plain and
/// the weighted accuracy alike.
DatasetSummary maia(std::span<const MetricSeries> series);

/// Same aggregate, from already-computed per-video averages.
DatasetSummary maia_from_averages(std::vector<VideoAverage> averages);

}  // namespace oadeval
