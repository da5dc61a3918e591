#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "oadeval/streaming_accuracy.hpp"
#include "oadeval/timeline.hpp"

namespace oadeval {

/// Error raised while reading annotation, detection or event data. The
/// message carries the 1-based line number of the offending row when known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, int line = 0)
        : std::runtime_error(line > 0 ? message + ", line " + std::to_string(line)
                                      : message),
          line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

/// Base for violations of the event-stream protocol.
class StreamProtocolError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Emit times went backwards within one video.
class StreamOrderError : public StreamProtocolError {
public:
    using StreamProtocolError::StreamProtocolError;
};

/// An event claimed time beyond its own emit instant.
class CausalityError : public StreamProtocolError {
public:
    using StreamProtocolError::StreamProtocolError;
};

/// Ordered action-class names; ids are contiguous from 1. Background is
/// implied (id 0, name "background") and never listed.
class ClassCatalog {
public:
    ClassId add(std::string name);                // returns the assigned id
    ClassId id_of(std::string_view name) const;   // kBackgroundClass when unknown
    const std::string& name_of(ClassId id) const;
    ClassId class_count() const { return static_cast<ClassId>(names_.size()); }
    bool empty() const { return names_.empty(); }
    const std::vector<std::string>& names() const { return names_; }

private:
    std::vector<std::string> names_;
    std::map<std::string, ClassId, std::less<>> ids_;
};

struct VideoMeta {
    std::string video_id;
    double duration = 0.0;  // seconds
};

using DetectionMap = std::map<std::string, std::vector<LabeledInterval>>;

/// A parsed ground-truth file: the declared videos, the class catalog, and
/// the (possibly empty) annotation list of each video.
struct Corpus {
    std::vector<VideoMeta> videos;  // declaration order
    ClassCatalog catalog;
    DetectionMap annotations;       // ground truth; scores absent

    const VideoMeta* find_video(std::string_view id) const;
    std::span<const LabeledInterval> annotations_for(const std::string& id) const;
};

/// Ground-truth format: optional "[classes]" section (one name per line, ids
/// assigned in order), then "[videos]" rows "video_id,duration", then
/// "[annotations]" rows "video_id,class_name,start,end". Lines starting with
/// '#' and blank lines are skipped. Without a classes section the catalog is
/// built from the annotations in first-appearance order.
Corpus parse_ground_truth(std::istream& in);

/// Detection format: "[detections]" rows "video_id,class_name,start,end,score".
/// Videos and classes must exist in the corpus; scores must lie in [0, 1].
/// An empty file is a valid all-background detector.
DetectionMap parse_detections(std::istream& in, const Corpus& corpus);

struct DetectionEvent {
    std::string video_id;
    LabeledInterval detection;
    double emit_time = 0.0;
};

/// Pulls timed detection events off a line stream, one record per line:
/// "video_id,class_name,start,end,score,emit_time". Enforces per-video
/// non-decreasing emit times and rejects events describing time beyond their
/// own emit instant.
class EventStreamReader {
public:
    EventStreamReader(std::istream& in, const Corpus& corpus);

    /// Next event in emit order, or nullopt at end of stream.
    std::optional<DetectionEvent> next();

private:
    std::istream* in_;
    const Corpus* corpus_;
    int line_ = 0;
    std::map<std::string, double, std::less<>> last_emit_;
};

/// CSV "t,ia,weighted_ia", one row per point, fixed 6-decimal formatting;
/// byte-stable across runs.
void write_metric_series(std::ostream& out, const MetricSeries& series);

/// CSV "video_id,avg_ia,avg_weighted_ia", one row per video plus a final
/// "maIA" row with the dataset averages.
void write_summary(std::ostream& out, const DatasetSummary& summary);

/// Writers for the two data formats above. Times and scores are serialized
/// at full precision, so write-then-parse reproduces the values exactly.
void write_ground_truth(std::ostream& out, const Corpus& corpus);
void write_detections(std::ostream& out, const Corpus& corpus,
                      const DetectionMap& detections);

}  // namespace oadeval
