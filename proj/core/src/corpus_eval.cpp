#include "oadeval/corpus_eval.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <ostream>
#include <thread>
#include <vector>

namespace oadeval {

namespace {

std::span<const LabeledInterval> detections_for(const DetectionMap& detections,
                                                const std::string& video_id) {
    const auto it = detections.find(video_id);
    if (it == detections.end()) return {};
    return it->second;
}

// Runs fn(video_index) over all videos with up to `jobs` workers, rethrowing
// the first failure. Results must be written to per-index storage by fn.
template <typename Fn>
void for_each_video(std::size_t video_count, int jobs, Fn&& fn) {
    if (jobs < 1) throw std::invalid_argument("jobs must be at least 1");
    const auto workers = static_cast<std::size_t>(jobs);
    if (workers == 1 || video_count <= 1) {
        for (std::size_t i = 0; i < video_count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= video_count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const auto n = std::min(workers, video_count);
    pool.reserve(n);
    for (std::size_t i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

void write_file(const std::filesystem::path& path,
                const std::function<void(std::ostream&)>& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    body(out);
    if (!out) throw std::runtime_error("failed while writing " + path.string());
}

}  // namespace

std::string sanitize_filename(std::string_view video_id) {
    std::string out;
    out.reserve(video_id.size());
    for (const char c : video_id) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
        out.push_back(ok ? c : '_');
    }
    return out;
}

DatasetSummary evaluate_corpus(const Corpus& corpus, const DetectionMap& detections,
                               const EvaluateOptions& options) {
    if (corpus.videos.empty()) throw std::invalid_argument("corpus has no videos");
    const ClassId class_count = std::max<ClassId>(corpus.catalog.class_count(), 1);
    std::vector<VideoAverage> averages(corpus.videos.size());

    if (options.out_dir) std::filesystem::create_directories(*options.out_dir);

    for_each_video(corpus.videos.size(), options.jobs, [&](std::size_t i) {
        const auto& meta = corpus.videos[i];
        SlotGrid grid(meta.duration, options.config.delta_t);
        const auto gt = corpus.annotations_for(meta.video_id);
        const auto dets = detections_for(detections, meta.video_id);
        if (options.out_dir) {
            const auto series = evaluate_intervals(gt, dets, grid, class_count,
                                                   options.config, meta.video_id);
            write_file(*options.out_dir / (sanitize_filename(meta.video_id) + ".csv"),
                       [&](std::ostream& out) { write_metric_series(out, series); });
            averages[i] = series_average(series);
        } else {
            averages[i] =
                evaluate_intervals_average(gt, dets, grid, class_count, meta.video_id);
        }
    });

    auto summary = maia_from_averages(std::move(averages));
    if (options.out_dir) {
        write_file(*options.out_dir / "summary.csv",
                   [&](std::ostream& out) { write_summary(out, summary); });
    }
    return summary;
}

DetectorReport summarize_detector(std::string name, const Corpus& corpus,
                                  const DetectionMap& detections,
                                  const EvaluateOptions& options) {
    if (corpus.videos.empty()) throw std::invalid_argument("corpus has no videos");
    const ClassId class_count = std::max<ClassId>(corpus.catalog.class_count(), 1);

    std::vector<VideoAverage> averages(corpus.videos.size());
    std::vector<FrameScoreTable> tables;
    tables.reserve(corpus.videos.size());
    for (std::size_t i = 0; i < corpus.videos.size(); ++i)
        tables.emplace_back(std::vector<ClassId>{}, class_count);

    for_each_video(corpus.videos.size(), options.jobs, [&](std::size_t i) {
        const auto& meta = corpus.videos[i];
        SlotGrid grid(meta.duration, options.config.delta_t);
        const auto gt_intervals = corpus.annotations_for(meta.video_id);
        const auto dets = detections_for(detections, meta.video_id);
        const auto gt = rasterize(gt_intervals, grid, class_count);
        const auto pred = rasterize(dets, grid, class_count);
        averages[i] = series_average(
            evaluate_video(gt, pred, options.config, meta.video_id));
        tables[i] = build_frame_score_table(gt, dets, class_count);
    });

    DetectorReport report{std::move(name), offline_metrics(tables),
                          maia_from_averages(std::move(averages))};
    return report;
}

void write_comparison_table(std::ostream& out, std::span<const DetectorReport> reports) {
    std::string buffer = "detector,map,cap,maia,weighted_maia\n";
    char num[64];
    for (const auto& r : reports) {
        buffer.append(r.name);
        const double values[] = {r.offline.map, r.offline.cap, r.online.maia,
                                 r.online.weighted_maia};
        for (const double v : values) {
            const int n = std::snprintf(num, sizeof num, ",%.6f", v);
            buffer.append(num, static_cast<std::size_t>(n));
        }
        buffer.push_back('\n');
    }
    out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
}

}  // namespace oadeval
