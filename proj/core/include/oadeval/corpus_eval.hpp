#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include "oadeval/formats.hpp"
#include "oadeval/ranking.hpp"
#include "oadeval/streaming_accuracy.hpp"

namespace oadeval {

/// Filename-safe rendering of a video id for per-video output files.
std::string sanitize_filename(std::string_view video_id);

struct EvaluateOptions {
    EvaluatorConfig config;
    int jobs = 1;
    std::optional<std::filesystem::path> out_dir;  // per-video CSVs + summary.csv when set
};

/// Evaluates every corpus video against the detections; videos missing from
/// the map count as all-background predictions. Videos are processed in
/// parallel up to `jobs`, with outputs identical for every jobs setting.
DatasetSummary evaluate_corpus(const Corpus& corpus, const DetectionMap& detections,
                               const EvaluateOptions& options);

struct DetectorReport {
    std::string name;
    OfflineMetrics offline;
    DatasetSummary online;
};

/// Offline (mAP/cAP) and online (maIA) metrics of one detector over the
/// corpus, score tables pooled per class in corpus order.
DetectorReport summarize_detector(std::string name, const Corpus& corpus,
                                  const DetectionMap& detections,
                                  const EvaluateOptions& options);

/// CSV "detector,map,cap,maia,weighted_maia", one row per report in input order.
void write_comparison_table(std::ostream& out, std::span<const DetectorReport> reports);

}  // namespace oadeval
