#include "oadeval/stream_session.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace oadeval {

namespace {
// An instant exactly at an event's emit time waits for that event (and any
// sharing its stamp); anything earlier is final the moment a later stamp shows up.
constexpr double kTickHoldback = 1e-9;
}  // namespace

StreamSession::StreamSession(const Corpus& corpus, EvaluatorConfig config)
    : config_(config) {
    const ClassId class_count = std::max<ClassId>(corpus.catalog.class_count(), 1);
    videos_.reserve(corpus.videos.size());
    for (const auto& meta : corpus.videos) {
        SlotGrid grid(meta.duration, config.delta_t);
        auto gt = rasterize(corpus.annotations_for(meta.video_id), grid, class_count);
        VideoState vs{meta.video_id,
                      grid,
                      std::move(gt.labels),
                      std::vector<ClassId>(static_cast<std::size_t>(grid.slot_count()),
                                           kBackgroundClass),
                      std::vector<SlotClaim>(static_cast<std::size_t>(grid.slot_count())),
                      {},
                      0};
        index_.emplace(meta.video_id, videos_.size());
        videos_.push_back(std::move(vs));
    }
}

void StreamSession::emit_instants_before(VideoState& vs, double time_limit,
                                         const TickSink& sink) {
    while (vs.ticked < vs.grid.slot_count() &&
           vs.grid.slot_end(vs.ticked) < time_limit - kTickHoldback) {
        const auto k = static_cast<std::size_t>(vs.ticked);
        vs.state = advance(vs.state, classify_slot(vs.gt_labels[k], vs.pred_labels[k]));
        ++vs.ticked;
        sink(vs.video_id, {vs.grid.slot_end(static_cast<std::int64_t>(k)),
                           ia_at(vs.state), weighted_ia_at(vs.state)});
    }
}

void StreamSession::apply_detection(VideoState& vs, const LabeledInterval& detection) {
    const double threshold = vs.grid.delta_t() * (0.5 - 1e-9);
    const auto [first, last] = touched_slot_range(detection.span, vs.grid);
    for (std::int64_t k = first; k <= last; ++k) {
        const double overlap = slot_overlap(detection.span, vs.grid, k);
        if (overlap < threshold) continue;
        const SlotClaim claim{overlap, detection.score.value_or(-1.0),
                              detection.span.start, detection.class_id};
        auto& winner = vs.winners[static_cast<std::size_t>(k)];
        if (!outranks(claim, winner)) continue;
        winner = claim;

        const auto slot = static_cast<std::size_t>(k);
        const ClassId old_label = vs.pred_labels[slot];
        if (old_label == claim.class_id) continue;
        vs.pred_labels[slot] = claim.class_id;
        if (k < vs.ticked) {
            // revise the already-emitted prefix; the ground-truth side is untouched
            const auto before = classify_slot(vs.gt_labels[slot], old_label);
            const auto after = classify_slot(vs.gt_labels[slot], claim.class_id);
            if (before == SlotOutcome::TruePositive) --vs.state.tp_sum;
            if (before == SlotOutcome::TrueNegative) --vs.state.tn_sum;
            if (after == SlotOutcome::TruePositive) ++vs.state.tp_sum;
            if (after == SlotOutcome::TrueNegative) ++vs.state.tn_sum;
        }
    }
}

void StreamSession::on_event(const DetectionEvent& event, const TickSink& sink) {
    const auto it = index_.find(event.video_id);
    if (it == index_.end())
        throw std::invalid_argument("event for unknown video '" + event.video_id + "'");
    auto& vs = videos_[it->second];
    emit_instants_before(vs, event.emit_time, sink);
    apply_detection(vs, event.detection);
}

void StreamSession::finish(const TickSink& sink) {
    for (auto& vs : videos_)
        emit_instants_before(vs, std::numeric_limits<double>::infinity(), sink);
}

std::vector<MetricSeries> StreamSession::final_series() const {
    std::vector<MetricSeries> out;
    out.reserve(videos_.size());
    for (const auto& vs : videos_) {
        DenseLabeling gt{vs.grid, vs.gt_labels};
        DenseLabeling pred{vs.grid, vs.pred_labels};
        out.push_back(evaluate_video(gt, pred, config_, vs.video_id));
    }
    return out;
}

}  // namespace oadeval
