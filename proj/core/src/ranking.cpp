#include "oadeval/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace oadeval {

namespace {

// Indices of the claimed entries, best score first; ties keep input order.
std::vector<std::uint32_t> ranked_order(std::span<const ScoredSlot> slots) {
    std::vector<std::uint32_t> order;
    order.reserve(slots.size());
    for (std::uint32_t i = 0; i < slots.size(); ++i)
        if (slots[i].score > 0.0) order.push_back(i);
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return slots[a].score > slots[b].score;
    });
    return order;
}

std::int64_t count_positives(std::span<const ScoredSlot> slots) {
    std::int64_t positives = 0;
    for (const auto& s : slots) positives += s.positive ? 1 : 0;
    return positives;
}

}  // namespace

double average_precision(std::span<const ScoredSlot> slots) {
    const auto positives = count_positives(slots);
    if (positives == 0) return 0.0;
    double sum = 0.0;
    std::int64_t tp = 0;
    std::int64_t rank = 0;
    for (const auto i : ranked_order(slots)) {
        ++rank;
        if (slots[i].positive) {
            ++tp;
            sum += static_cast<double>(tp) / static_cast<double>(rank);
        }
    }
    return sum / static_cast<double>(positives);
}

double calibrated_average_precision(std::span<const ScoredSlot> slots) {
    const auto positives = count_positives(slots);
    if (positives == 0) return 0.0;
    const auto negatives = static_cast<std::int64_t>(slots.size()) - positives;
    const double w = static_cast<double>(negatives) / static_cast<double>(positives);
    double sum = 0.0;
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    for (const auto i : ranked_order(slots)) {
        if (slots[i].positive) {
            ++tp;
            const double wtp = w * static_cast<double>(tp);
            sum += fp == 0 ? 1.0 : wtp / (wtp + static_cast<double>(fp));
        } else {
            ++fp;
        }
    }
    return sum / static_cast<double>(positives);
}

double mean_over_classes(const std::map<ClassId, double>& per_class) {
    if (per_class.empty())
        throw std::invalid_argument("mean over classes needs at least one class");
    double sum = 0.0;
    for (const auto& [id, value] : per_class) sum += value;
    return sum / static_cast<double>(per_class.size());
}

FrameScoreTable::FrameScoreTable(std::vector<ClassId> gt_labels, ClassId class_count)
    : gt_labels_(std::move(gt_labels)), class_count_(class_count) {
    if (class_count < 1) throw std::invalid_argument("class_count must be at least 1");
    for (const auto label : gt_labels_)
        if (label < 0 || label > class_count)
            throw std::invalid_argument("ground-truth label outside the class set");
    scores_.assign(gt_labels_.size() * static_cast<std::size_t>(class_count), 0.0);
}

double FrameScoreTable::score(std::int64_t slot, ClassId class_id) const {
    return scores_[static_cast<std::size_t>(slot) * static_cast<std::size_t>(class_count_) +
                   static_cast<std::size_t>(class_id - 1)];
}

void FrameScoreTable::set_score(std::int64_t slot, ClassId class_id, double value) {
    if (!std::isfinite(value)) throw std::invalid_argument("scores must be finite");
    scores_[static_cast<std::size_t>(slot) * static_cast<std::size_t>(class_count_) +
            static_cast<std::size_t>(class_id - 1)] = value;
}

void FrameScoreTable::append_class_column(ClassId class_id,
                                          std::vector<ScoredSlot>& out) const {
    for (std::int64_t k = 0; k < slot_count(); ++k)
        out.push_back({score(k, class_id), gt_label(k) == class_id});
}

FrameScoreTable build_frame_score_table(const DenseLabeling& gt,
                                        std::span<const LabeledInterval> detections,
                                        ClassId class_count) {
    FrameScoreTable table(gt.labels, class_count);
    const double threshold = gt.grid.delta_t() * (0.5 - 1e-9);
    for (const auto& det : detections) {
        validate_interval(det.span);
        if (det.class_id < 1 || det.class_id > class_count)
            throw std::invalid_argument("unknown class id " + std::to_string(det.class_id));
        const double value = det.score.value_or(0.0);
        const auto [first, last] = touched_slot_range(det.span, gt.grid);
        for (std::int64_t k = first; k <= last; ++k) {
            if (slot_overlap(det.span, gt.grid, k) < threshold) continue;
            if (value > table.score(k, det.class_id)) table.set_score(k, det.class_id, value);
        }
    }
    return table;
}

OfflineMetrics offline_metrics(std::span<const FrameScoreTable> tables) {
    if (tables.empty()) throw std::invalid_argument("no score tables given");
    const ClassId class_count = tables.front().class_count();
    for (const auto& t : tables)
        if (t.class_count() != class_count)
            throw std::invalid_argument("score tables disagree on the class count");

    OfflineMetrics metrics;
    std::vector<ScoredSlot> column;
    for (ClassId c = 1; c <= class_count; ++c) {
        column.clear();
        for (const auto& t : tables) t.append_class_column(c, column);
        metrics.ap_per_class[c] = average_precision(column);
        metrics.cap_per_class[c] = calibrated_average_precision(column);
    }
    metrics.map = mean_over_classes(metrics.ap_per_class);
    metrics.cap = mean_over_classes(metrics.cap_per_class);
    return metrics;
}

}  // namespace oadeval
