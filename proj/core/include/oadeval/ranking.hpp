#pragma once

#include <map>
#include <span>
#include <vector>

#include "oadeval/timeline.hpp"

namespace oadeval {

/// One entry of a per-class ranking: a detector confidence for the slot and
/// whether the slot truly belongs to the class under evaluation.
///
/// A score of zero means the detector made no claim for the slot. Unclaimed
/// entries never enter the ranking, but an unclaimed positive still counts
/// toward the total, so a detector that stays silent scores zero.
struct ScoredSlot {
    double score = 0.0;
    bool positive = false;
};

/// Ranking average precision: the mean of precision-at-rank over the claimed
/// positives, divided by the total number of positives. Ties keep input
/// order. Returns 0 when there are no positives.
double average_precision(std::span<const ScoredSlot> slots);

/// Average precision with calibrated precision (w*TP) / (w*TP + FP), where
/// w = negatives / positives over the whole table. Matches
/// average_precision exactly whenever w = 1.
double calibrated_average_precision(std::span<const ScoredSlot> slots);

/// Unweighted arithmetic mean over action classes (background is never a
/// key). Throws std::invalid_argument on an empty map.
double mean_over_classes(const std::map<ClassId, double>& per_class);

/// Per-slot, per-class detector scores on a grid, together with the
/// ground-truth label of each slot. Working at the slot resolution lets the
/// offline and the online metrics see identical inputs.
class FrameScoreTable {
public:
    FrameScoreTable(std::vector<ClassId> gt_labels, ClassId class_count);

    ClassId class_count() const { return class_count_; }
    std::int64_t slot_count() const { return static_cast<std::int64_t>(gt_labels_.size()); }
    double score(std::int64_t slot, ClassId class_id) const;
    void set_score(std::int64_t slot, ClassId class_id, double value);
    ClassId gt_label(std::int64_t slot) const {
        return gt_labels_[static_cast<std::size_t>(slot)];
    }

    /// Appends this table's ranking column for one class, preserving slot order.
    void append_class_column(ClassId class_id, std::vector<ScoredSlot>& out) const;

private:
    std::vector<ClassId> gt_labels_;
    ClassId class_count_;
    std::vector<double> scores_;  // slot-major, class_count entries per slot
};

/// Builds the score table for one video: every detection contributes its
/// score to the slots it covers by at least half, keeping the per-slot
/// maximum; slots nothing claims stay at zero for every class.
FrameScoreTable build_frame_score_table(const DenseLabeling& gt,
                                        std::span<const LabeledInterval> detections,
                                        ClassId class_count);

struct OfflineMetrics {
    std::map<ClassId, double> ap_per_class;
    std::map<ClassId, double> cap_per_class;
    double map = 0.0;
    double cap = 0.0;
};

/// mAP and cAP over one or more score tables, pooled per class in input
/// order. All tables must agree on the class count.
OfflineMetrics offline_metrics(std::span<const FrameScoreTable> tables);

}  // namespace oadeval
