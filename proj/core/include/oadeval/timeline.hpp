#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace oadeval {

using ClassId = std::int32_t;

/// Class id reserved for "no action happening".
inline constexpr ClassId kBackgroundClass = 0;

/// Half-open time span [start, end) in seconds.
struct TimeInterval {
    double start = 0.0;
    double end = 0.0;

    double length() const { return end - start; }
};

/// Throws std::invalid_argument unless 0 <= start < end.
void validate_interval(const TimeInterval& span);

/// An action span with its class and, for detections, a confidence score.
/// Background is never stored as an interval; it is the absence of one.
struct LabeledInterval {
    TimeInterval span;
    ClassId class_id = 1;          // always >= 1
    std::optional<double> score;   // in [0, 1] when present, absent for ground truth
};

/// Uniform quantization of a video timeline into slots of delta_t seconds.
/// Slot k covers [k*delta_t, (k+1)*delta_t); a trailing remainder shorter
/// than one slot is discarded.
class SlotGrid {
public:
    SlotGrid(double duration, double delta_t);

    double duration() const { return duration_; }
    double delta_t() const { return delta_t_; }
    std::int64_t slot_count() const { return slot_count_; }

    double slot_start(std::int64_t k) const { return static_cast<double>(k) * delta_t_; }
    double slot_end(std::int64_t k) const { return static_cast<double>(k + 1) * delta_t_; }

    bool operator==(const SlotGrid&) const = default;

private:
    double duration_;
    double delta_t_;
    std::int64_t slot_count_;
};

/// floor(t / delta_t), snapping up when t lands a rounding error short of an
/// exact multiple of delta_t.
std::int64_t slot_floor(double t, double delta_t);

/// Per-slot class assignment over a grid; kBackgroundClass marks background.
struct DenseLabeling {
    SlotGrid grid;
    std::vector<ClassId> labels;   // length == grid.slot_count()
};

/// Confusion outcome of a single slot.
enum class SlotOutcome {
    TruePositive,
    TrueNegative,
    FalsePositive,
    FalseNegative,
};

/// gt/pred agreement on one slot. A wrong-class prediction on an action slot
/// is a miss (false negative), not a false positive; the confusion classes
/// partition every (gt, pred) pair.
SlotOutcome classify_slot(ClassId gt_label, ClassId pred_label);

/// A bid for ownership of one slot. Larger overlap wins; ties fall to the
/// higher score, then the earlier interval start, then the smaller class id.
struct SlotClaim {
    double overlap = -1.0;
    double score = -1.0;   // absent scores rank below any real score
    double start = 0.0;
    ClassId class_id = kBackgroundClass;
};

/// Strict "a beats b" under the slot-ownership order above.
bool outranks(const SlotClaim& a, const SlotClaim& b);

/// Overlap in seconds between an interval (clipped to the grid) and slot k.
double slot_overlap(const TimeInterval& span, const SlotGrid& grid, std::int64_t k);

/// Inclusive range [first, last] of slots the interval overlaps at all,
/// clamped to the grid; first > last when it touches none.
std::pair<std::int64_t, std::int64_t> touched_slot_range(const TimeInterval& span,
                                                         const SlotGrid& grid);

/// Streams per-slot winning labels for a set of intervals without
/// materializing the dense vector. A slot is a candidate for an interval only
/// when the interval covers at least half of it.
class SlotLabeler {
public:
    SlotLabeler(std::span<const LabeledInterval> intervals, const SlotGrid& grid,
                ClassId class_count);

    /// Label of the next slot; valid exactly grid.slot_count() times.
    ClassId next();

private:
    struct Entry {
        double start;
        double end;     // clipped to the grid
        double score;
        ClassId class_id;
    };

    SlotGrid grid_;
    double coverage_threshold_;
    std::vector<Entry> pending_;    // sorted by start, consumed front to back
    std::size_t next_pending_ = 0;
    std::vector<Entry> active_;
    std::int64_t slot_ = 0;
};

/// Dense labeling of every slot. class_count bounds the valid ids; an
/// interval with class_id outside [1, class_count] is rejected. Intervals
/// reaching past the grid are clipped, never an error.
DenseLabeling rasterize(std::span<const LabeledInterval> intervals, const SlotGrid& grid,
                        ClassId class_count);

/// Reconstructs the slot-aligned intervals (maximal same-class runs) encoded
/// by a labeling; rasterizing them again reproduces the labeling exactly.
std::vector<LabeledInterval> slot_aligned_intervals(const DenseLabeling& labeling);

}  // namespace oadeval
