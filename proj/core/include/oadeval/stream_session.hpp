#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "oadeval/formats.hpp"
#include "oadeval/streaming_accuracy.hpp"

namespace oadeval {

/// Replays a detection event stream against the ground truth, scoring each
/// delta_t instant once no earlier-stamped event can arrive.
///
/// Emitted instants reflect the detections known at that moment. A later
/// event may still revise already-scored slots (a detector extending one of
/// its detections backwards); the revision shows up in every subsequent
/// instant and in the final series, which always matches the batch
/// evaluation of the same detections. When the stream never rewrites history
/// the live instants match the batch ones too.
class StreamSession {
public:
    using TickSink = std::function<void(const std::string& video_id, const MetricPoint&)>;

    StreamSession(const Corpus& corpus, EvaluatorConfig config);

    /// Feeds the next event (per-video emit order, as EventStreamReader
    /// yields them); fires the sink for every instant that becomes final.
    void on_event(const DetectionEvent& event, const TickSink& sink);

    /// End of stream: flushes every remaining instant of every video, in
    /// corpus order.
    void finish(const TickSink& sink);

    /// Batch-identical per-video series over all events seen so far.
    std::vector<MetricSeries> final_series() const;

private:
    struct VideoState {
        std::string video_id;
        SlotGrid grid;
        std::vector<ClassId> gt_labels;
        std::vector<ClassId> pred_labels;
        std::vector<SlotClaim> winners;
        EvaluatorState state;   // over the already-emitted prefix
        std::int64_t ticked = 0;
    };

    void emit_instants_before(VideoState& vs, double time_limit, const TickSink& sink);
    void apply_detection(VideoState& vs, const LabeledInterval& detection);

    EvaluatorConfig config_;
    std::vector<VideoState> videos_;  // corpus order
    std::map<std::string, std::size_t, std::less<>> index_;
};

}  // namespace oadeval
