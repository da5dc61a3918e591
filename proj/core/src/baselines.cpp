#include "oadeval/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace oadeval {

namespace {

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Knuth's product method, chunked so exp(-lambda) never underflows. The
// mt19937_64 sequence is pinned by the standard, so counts are reproducible
// across platforms.
std::int64_t draw_poisson(std::mt19937_64& rng, double lambda) {
    std::int64_t total = 0;
    while (lambda > 0.0) {
        const double chunk = std::min(lambda, 500.0);
        const double limit = std::exp(-chunk);
        double product = 1.0;
        std::int64_t k = 0;
        do {
            ++k;
            product *= uniform01(rng);
        } while (product > limit);
        total += k - 1;
        lambda -= chunk;
    }
    return total;
}

}  // namespace

std::vector<LabeledInterval> all_background(double video_duration) {
    if (!(video_duration > 0.0))
        throw std::invalid_argument("video duration must be positive");
    return {};
}

std::vector<LabeledInterval> perfect_model(std::span<const LabeledInterval> gt) {
    std::vector<LabeledInterval> out;
    out.reserve(gt.size());
    for (const auto& li : gt) out.push_back({li.span, li.class_id, 1.0});
    return out;
}

std::vector<LabeledInterval> uniform_random(std::uint64_t seed, double video_duration,
                                            ClassId class_count, double rate_per_minute,
                                            double min_length_seconds) {
    if (!(video_duration > 0.0))
        throw std::invalid_argument("video duration must be positive");
    if (class_count < 1) throw std::invalid_argument("need at least one action class");
    if (!(rate_per_minute > 0.0)) throw std::invalid_argument("rate must be positive");
    if (!(min_length_seconds > 0.0))
        throw std::invalid_argument("minimum detection length must be positive");

    std::mt19937_64 rng(seed);
    const double lambda = rate_per_minute * video_duration / 60.0;
    const std::int64_t count = draw_poisson(rng, lambda);
    const double max_length = std::max(30.0, min_length_seconds);

    std::vector<LabeledInterval> out;
    out.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) {
        const double start = uniform01(rng) * video_duration;
        const double length =
            min_length_seconds + uniform01(rng) * (max_length - min_length_seconds);
        const double end = std::min(start + length, video_duration);
        const auto cls = static_cast<ClassId>(
            1 + std::min<std::int64_t>(class_count - 1,
                                       static_cast<std::int64_t>(uniform01(rng) *
                                                                 class_count)));
        const double score = uniform01(rng);
        out.push_back({{start, end}, cls, score});
    }
    std::sort(out.begin(), out.end(), [](const LabeledInterval& a, const LabeledInterval& b) {
        if (a.span.start != b.span.start) return a.span.start < b.span.start;
        if (a.span.end != b.span.end) return a.span.end < b.span.end;
        if (a.class_id != b.class_id) return a.class_id < b.class_id;
        return a.score.value_or(0.0) < b.score.value_or(0.0);
    });
    return out;
}

}  // namespace oadeval
