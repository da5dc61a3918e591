#include "oadeval/streaming_accuracy.hpp"

#include <stdexcept>
#include <utility>

namespace oadeval {

EvaluatorState advance(EvaluatorState state, SlotOutcome outcome) {
    ++state.slots_seen;
    switch (outcome) {
        case SlotOutcome::TruePositive:
            ++state.tp_sum;
            ++state.gt_action_slots;
            break;
        case SlotOutcome::FalseNegative:
            ++state.gt_action_slots;
            break;
        case SlotOutcome::TrueNegative:
            ++state.tn_sum;
            ++state.gt_background_slots;
            break;
        case SlotOutcome::FalsePositive:
            ++state.gt_background_slots;
            break;
    }
    return state;
}

double ia_at(const EvaluatorState& state) {
    if (state.slots_seen <= 0)
        throw std::domain_error("accuracy is undefined before one full slot has elapsed");
    return static_cast<double>(state.tp_sum + state.tn_sum) /
           static_cast<double>(state.slots_seen);
}

double weighted_ia_at(const EvaluatorState& state) {
    if (state.slots_seen <= 0)
        throw std::domain_error("accuracy is undefined before one full slot has elapsed");
    if (state.gt_action_slots == 0 || state.gt_background_slots == 0) return ia_at(state);
    const double w = static_cast<double>(state.gt_background_slots) /
                     static_cast<double>(state.gt_action_slots);
    const double num = w * static_cast<double>(state.tp_sum) +
                       static_cast<double>(state.tn_sum);
    const double den = w * static_cast<double>(state.gt_action_slots) +
                       static_cast<double>(state.gt_background_slots);
    return num / den;
}

namespace {

void check_config_grid(const EvaluatorConfig& config, const SlotGrid& grid) {
    if (config.delta_t != grid.delta_t())
        throw std::invalid_argument("config delta_t differs from the slot grid");
}

}  // namespace

MetricSeries evaluate_video(const DenseLabeling& gt, const DenseLabeling& pred,
                            const EvaluatorConfig& config, std::string video_id) {
    if (!(gt.grid == pred.grid))
        throw std::invalid_argument("ground truth and prediction grids differ");
    check_config_grid(config, gt.grid);

    MetricSeries series{std::move(video_id), config, {}, gt.grid.duration()};
    series.points.reserve(gt.labels.size());
    EvaluatorState state;
    for (std::size_t k = 0; k < gt.labels.size(); ++k) {
        state = advance(state, classify_slot(gt.labels[k], pred.labels[k]));
        series.points.push_back({gt.grid.slot_end(static_cast<std::int64_t>(k)),
                                 ia_at(state), weighted_ia_at(state)});
    }
    return series;
}

MetricSeries evaluate_intervals(std::span<const LabeledInterval> gt,
                                std::span<const LabeledInterval> detections,
                                const SlotGrid& grid, ClassId class_count,
                                const EvaluatorConfig& config, std::string video_id) {
    check_config_grid(config, grid);
    SlotLabeler gt_cursor(gt, grid, class_count);
    SlotLabeler pred_cursor(detections, grid, class_count);

    MetricSeries series{std::move(video_id), config, {}, grid.duration()};
    series.points.reserve(static_cast<std::size_t>(grid.slot_count()));
    EvaluatorState state;
    for (std::int64_t k = 0; k < grid.slot_count(); ++k) {
        state = advance(state, classify_slot(gt_cursor.next(), pred_cursor.next()));
        series.points.push_back({grid.slot_end(k), ia_at(state), weighted_ia_at(state)});
    }
    return series;
}

VideoAverage series_average(const MetricSeries& series) {
    if (series.points.empty())
        throw std::invalid_argument("cannot average an empty metric series");
    double ia_sum = 0.0;
    double weighted_sum = 0.0;
    for (const auto& p : series.points) {
        ia_sum += p.ia;
        weighted_sum += p.weighted_ia;
    }
    const auto n = static_cast<double>(series.points.size());
    return {series.video_id, ia_sum / n, weighted_sum / n};
}

VideoAverage evaluate_intervals_average(std::span<const LabeledInterval> gt,
                                        std::span<const LabeledInterval> detections,
                                        const SlotGrid& grid, ClassId class_count,
                                        std::string video_id) {
    SlotLabeler gt_cursor(gt, grid, class_count);
    SlotLabeler pred_cursor(detections, grid, class_count);

    EvaluatorState state;
    double ia_sum = 0.0;
    double weighted_sum = 0.0;
    for (std::int64_t k = 0; k < grid.slot_count(); ++k) {
        state = advance(state, classify_slot(gt_cursor.next(), pred_cursor.next()));
        ia_sum += ia_at(state);
        weighted_sum += weighted_ia_at(state);
    }
    const auto n = static_cast<double>(grid.slot_count());
    return {std::move(video_id), ia_sum / n, weighted_sum / n};
}

DatasetSummary maia(std::span<const MetricSeries> series) {
    if (series.empty()) throw std::invalid_argument("maia needs at least one video");
    std::vector<VideoAverage> averages;
    averages.reserve(series.size());
    for (const auto& s : series) averages.push_back(series_average(s));
    return maia_from_averages(std::move(averages));
}

DatasetSummary maia_from_averages(std::vector<VideoAverage> averages) {
    if (averages.empty()) throw std::invalid_argument("maia needs at least one video");
    double ia_sum = 0.0;
    double weighted_sum = 0.0;
    for (const auto& a : averages) {
        ia_sum += a.avg_ia;
        weighted_sum += a.avg_weighted_ia;
    }
    const auto n = static_cast<double>(averages.size());
    DatasetSummary summary;
    summary.video_count = static_cast<std::int64_t>(averages.size());
    summary.per_video = std::move(averages);
    summary.maia = ia_sum / n;
    summary.weighted_maia = weighted_sum / n;
    return summary;
}

}  // namespace oadeval
