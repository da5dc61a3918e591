#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "oadeval/timeline.hpp"

namespace oadeval {

enum class BaselineKind {
    AllBackground,  // never claims an action
    PerfectModel,   // reproduces the ground truth with full confidence
    UniformRandom,  // seeded random detections at a fixed expected rate
};

/// Detections of a model that never generates an action class: none at all.
std::vector<LabeledInterval> all_background(double video_duration);

/// Copy of the ground-truth intervals with confidence 1.0 on each; scores
/// the maximum of any metric that can saturate.
std::vector<LabeledInterval> perfect_model(std::span<const LabeledInterval> gt);

/// Seeded random detections: the count is Poisson at rate_per_minute, starts
/// are uniform over the video, lengths uniform in [min_length_seconds, 30 s]
/// clipped to the video end, classes and scores uniform. Identical arguments
/// give identical output on every platform.
std::vector<LabeledInterval> uniform_random(std::uint64_t seed, double video_duration,
                                            ClassId class_count, double rate_per_minute,
                                            double min_length_seconds);

}  // namespace oadeval
