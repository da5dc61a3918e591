#include "oadeval/timeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace oadeval {

namespace {

// Tolerance for slot-boundary arithmetic, as a fraction of delta_t. Keeps a
// coverage of exactly half a slot on the qualifying side and absorbs the
// rounding error of duration/delta_t quotients.
constexpr double kBoundarySnap = 1e-9;

}  // namespace

void validate_interval(const TimeInterval& span) {
    if (!std::isfinite(span.start) || !std::isfinite(span.end))
        throw std::invalid_argument("interval bounds must be finite");
    if (span.start < 0.0)
        throw std::invalid_argument("interval start must be non-negative");
    if (!(span.end > span.start))
        throw std::invalid_argument("interval end must be greater than its start");
}

std::int64_t slot_floor(double t, double delta_t) {
    const double q = t / delta_t;
    auto k = static_cast<std::int64_t>(q);
    if (q - static_cast<double>(k) > 1.0 - kBoundarySnap) ++k;
    return k;
}

SlotGrid::SlotGrid(double duration, double delta_t)
    : duration_(duration), delta_t_(delta_t) {
    if (!std::isfinite(duration) || !(duration > 0.0))
        throw std::invalid_argument("video duration must be positive");
    if (!std::isfinite(delta_t) || !(delta_t > 0.0))
        throw std::invalid_argument("delta_t must be positive");
    slot_count_ = slot_floor(duration, delta_t);
    if (slot_count_ == 0)
        throw std::invalid_argument("delta_t exceeds the video duration; no full slot fits");
}

SlotOutcome classify_slot(ClassId gt_label, ClassId pred_label) {
    if (gt_label < 0 || pred_label < 0)
        throw std::invalid_argument("negative class label");
    if (gt_label == kBackgroundClass)
        return pred_label == kBackgroundClass ? SlotOutcome::TrueNegative
                                              : SlotOutcome::FalsePositive;
    return pred_label == gt_label ? SlotOutcome::TruePositive : SlotOutcome::FalseNegative;
}

bool outranks(const SlotClaim& a, const SlotClaim& b) {
    if (a.overlap != b.overlap) return a.overlap > b.overlap;
    if (a.score != b.score) return a.score > b.score;
    if (a.start != b.start) return a.start < b.start;
    return a.class_id < b.class_id;
}

double slot_overlap(const TimeInterval& span, const SlotGrid& grid, std::int64_t k) {
    const double grid_end = grid.slot_end(grid.slot_count() - 1);
    const double lo = std::max(span.start, grid.slot_start(k));
    const double hi = std::min(std::min(span.end, grid_end), grid.slot_end(k));
    return std::max(0.0, hi - lo);
}

std::pair<std::int64_t, std::int64_t> touched_slot_range(const TimeInterval& span,
                                                         const SlotGrid& grid) {
    const auto n = grid.slot_count();
    auto first = static_cast<std::int64_t>(span.start / grid.delta_t());
    // last slot whose start lies strictly before the interval end
    auto last = slot_floor(span.end, grid.delta_t());
    if (span.end <= grid.slot_start(last)) --last;
    first = std::max<std::int64_t>(first, 0);
    last = std::min(last, n - 1);
    return {first, last};
}

SlotLabeler::SlotLabeler(std::span<const LabeledInterval> intervals, const SlotGrid& grid,
                         ClassId class_count)
    : grid_(grid), coverage_threshold_(grid.delta_t() * (0.5 - kBoundarySnap)) {
    if (class_count < 1) throw std::invalid_argument("class_count must be at least 1");
    const double grid_end = grid.slot_end(grid.slot_count() - 1);
    pending_.reserve(intervals.size());
    for (const auto& li : intervals) {
        validate_interval(li.span);
        if (li.class_id < 1 || li.class_id > class_count)
            throw std::invalid_argument("unknown class id " + std::to_string(li.class_id));
        if (li.span.start > grid.duration())
            throw std::invalid_argument("interval starts beyond the video duration");
        const double end = std::min(li.span.end, grid_end);
        if (end <= li.span.start) continue;  // lives entirely in the discarded remainder
        pending_.push_back(Entry{li.span.start, end, li.score.value_or(-1.0), li.class_id});
    }
    std::sort(pending_.begin(), pending_.end(), [](const Entry& a, const Entry& b) {
        if (a.start != b.start) return a.start < b.start;
        if (a.end != b.end) return a.end < b.end;
        if (a.class_id != b.class_id) return a.class_id < b.class_id;
        return a.score < b.score;
    });
}

ClassId SlotLabeler::next() {
    const double lo = grid_.slot_start(slot_);
    const double hi = grid_.slot_end(slot_);
    ++slot_;
    while (next_pending_ < pending_.size() && pending_[next_pending_].start < hi) {
        active_.push_back(pending_[next_pending_]);
        ++next_pending_;
    }
    std::erase_if(active_, [&](const Entry& e) { return e.end <= lo; });

    SlotClaim best;
    for (const auto& e : active_) {
        const double overlap = std::min(e.end, hi) - std::max(e.start, lo);
        if (overlap < coverage_threshold_) continue;
        const SlotClaim claim{overlap, e.score, e.start, e.class_id};
        if (outranks(claim, best)) best = claim;
    }
    return best.class_id;
}

DenseLabeling rasterize(std::span<const LabeledInterval> intervals, const SlotGrid& grid,
                        ClassId class_count) {
    SlotLabeler labeler(intervals, grid, class_count);
    DenseLabeling out{grid, {}};
    out.labels.resize(static_cast<std::size_t>(grid.slot_count()));
    for (auto& label : out.labels) label = labeler.next();
    return out;
}

std::vector<LabeledInterval> slot_aligned_intervals(const DenseLabeling& labeling) {
    std::vector<LabeledInterval> out;
    const auto n = static_cast<std::int64_t>(labeling.labels.size());
    std::int64_t k = 0;
    while (k < n) {
        const ClassId c = labeling.labels[static_cast<std::size_t>(k)];
        std::int64_t j = k + 1;
        while (j < n && labeling.labels[static_cast<std::size_t>(j)] == c) ++j;
        if (c != kBackgroundClass)
            out.push_back({{labeling.grid.slot_start(k), labeling.grid.slot_end(j - 1)},
                           c,
                           std::nullopt});
        k = j;
    }
    return out;
}

}  // namespace oadeval
