// Command-line front end: evaluate detection files, replay live event
// streams, generate reference baselines, and compare detectors.
//
// Exit codes: 0 success, 2 usage or input errors, 3 event-stream protocol
// violations.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oadeval/baselines.hpp"
#include "oadeval/corpus_eval.hpp"
#include "oadeval/formats.hpp"
#include "oadeval/stream_session.hpp"

namespace {

constexpr int kExitSuccess = 0;
constexpr int kExitUsage = 2;
constexpr int kExitStreamProtocol = 3;

struct Options {
    std::string gt_path;
    std::vector<std::string> det_paths;
    std::string baseline_kind;
    std::uint64_t seed = 0;
    double rate_per_minute = 2.0;
    double delta_t = 0.5;
    bool weighted = true;
    std::string out_dir;
    int jobs = 1;
};

oadeval::Corpus load_ground_truth(const std::string& path) {
    if (!std::filesystem::exists(path))
        throw std::invalid_argument("ground truth not found: " + path);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open ground truth: " + path);
    return oadeval::parse_ground_truth(in);
}

oadeval::DetectionMap load_detections(const std::string& path,
                                      const oadeval::Corpus& corpus) {
    if (!std::filesystem::exists(path))
        throw std::invalid_argument("detections not found: " + path);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open detections: " + path);
    return oadeval::parse_detections(in, corpus);
}

void write_text_file(const std::filesystem::path& path,
                     const std::function<void(std::ostream&)>& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    body(out);
}

int cmd_evaluate(const Options& opt) {
    const auto corpus = load_ground_truth(opt.gt_path);
    const auto detections = load_detections(opt.det_paths.front(), corpus);
    oadeval::EvaluateOptions eval{{opt.delta_t, opt.weighted}, opt.jobs,
                                  std::filesystem::path(opt.out_dir)};
    const auto summary = oadeval::evaluate_corpus(corpus, detections, eval);
    std::printf("%s %.6f\n", opt.weighted ? "weighted_maIA" : "maIA",
                opt.weighted ? summary.weighted_maia : summary.maia);
    return kExitSuccess;
}

int cmd_stream(const Options& opt) {
    const auto corpus = load_ground_truth(opt.gt_path);

    std::ifstream file;
    std::istream* events = &std::cin;
    if (!opt.det_paths.empty()) {
        if (!std::filesystem::exists(opt.det_paths.front()))
            throw std::invalid_argument("event stream not found: " + opt.det_paths.front());
        file.open(opt.det_paths.front(), std::ios::binary);
        if (!file)
            throw std::invalid_argument("cannot open event stream: " + opt.det_paths.front());
        events = &file;
    }

    const bool tag_video = corpus.videos.size() > 1;
    std::printf(tag_video ? "video_id,t,ia,weighted_ia\n" : "t,ia,weighted_ia\n");
    const auto sink = [&](const std::string& video_id, const oadeval::MetricPoint& p) {
        if (tag_video)
            std::printf("%s,%.6f,%.6f,%.6f\n", video_id.c_str(), p.t_prime, p.ia,
                        p.weighted_ia);
        else
            std::printf("%.6f,%.6f,%.6f\n", p.t_prime, p.ia, p.weighted_ia);
    };

    oadeval::StreamSession session(corpus, {opt.delta_t, opt.weighted});
    oadeval::EventStreamReader reader(*events, corpus);
    while (const auto event = reader.next()) session.on_event(*event, sink);
    session.finish(sink);

    if (!opt.out_dir.empty()) {
        const std::filesystem::path out_dir(opt.out_dir);
        std::filesystem::create_directories(out_dir);
        const auto series = session.final_series();
        std::vector<oadeval::VideoAverage> averages;
        averages.reserve(series.size());
        for (const auto& s : series) {
            write_text_file(out_dir / (oadeval::sanitize_filename(s.video_id) + ".csv"),
                            [&](std::ostream& out) { write_metric_series(out, s); });
            averages.push_back(oadeval::series_average(s));
        }
        const auto summary = oadeval::maia_from_averages(std::move(averages));
        write_text_file(out_dir / "summary.csv",
                        [&](std::ostream& out) { write_summary(out, summary); });
    }
    return kExitSuccess;
}

int cmd_baseline(const Options& opt) {
    const auto corpus = load_ground_truth(opt.gt_path);
    oadeval::DetectionMap detections;
    if (opt.baseline_kind == "all-bg") {
        // a detector that never claims an action: no rows at all
    } else if (opt.baseline_kind == "pm") {
        for (const auto& v : corpus.videos) {
            auto copy = oadeval::perfect_model(corpus.annotations_for(v.video_id));
            if (!copy.empty()) detections[v.video_id] = std::move(copy);
        }
    } else if (opt.baseline_kind == "random") {
        const auto classes = std::max<oadeval::ClassId>(corpus.catalog.class_count(), 1);
        if (corpus.catalog.empty())
            throw std::invalid_argument(
                "random baseline needs a class catalog; add a [classes] section or "
                "annotations to the ground truth");
        std::uint64_t index = 0;
        for (const auto& v : corpus.videos) {
            ++index;
            const std::uint64_t video_seed = opt.seed ^ (0x9E3779B97F4A7C15ULL * index);
            auto dets = oadeval::uniform_random(video_seed, v.duration, classes,
                                                opt.rate_per_minute, opt.delta_t);
            if (!dets.empty()) detections[v.video_id] = std::move(dets);
        }
    } else {
        throw std::invalid_argument("unknown baseline kind: " + opt.baseline_kind);
    }

    const std::filesystem::path out_dir(opt.out_dir);
    std::filesystem::create_directories(out_dir);
    const auto path = out_dir / (opt.baseline_kind + "_detections.csv");
    write_text_file(path, [&](std::ostream& out) {
        write_detections(out, corpus, detections);
    });
    std::printf("%s\n", path.string().c_str());
    return kExitSuccess;
}

int cmd_summarize(const Options& opt) {
    const auto corpus = load_ground_truth(opt.gt_path);
    std::vector<oadeval::DetectorReport> reports;
    reports.reserve(opt.det_paths.size());
    for (const auto& path : opt.det_paths) {
        const auto detections = load_detections(path, corpus);
        oadeval::EvaluateOptions eval{{opt.delta_t, opt.weighted}, opt.jobs, std::nullopt};
        reports.push_back(oadeval::summarize_detector(path, corpus, detections, eval));
    }
    oadeval::write_comparison_table(std::cout, reports);
    if (!opt.out_dir.empty()) {
        const std::filesystem::path out_dir(opt.out_dir);
        std::filesystem::create_directories(out_dir);
        write_text_file(out_dir / "comparison.csv", [&](std::ostream& out) {
            oadeval::write_comparison_table(out, reports);
        });
    }
    return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Streaming evaluation toolkit for online action detection"};
    app.require_subcommand(1);

    Options opt;

    auto add_common = [&](CLI::App* cmd, bool det_required, bool det_repeatable) {
        cmd->add_option("--gt", opt.gt_path, "ground-truth file")->required();
        auto* det = cmd->add_option("--det", opt.det_paths,
                                    det_repeatable ? "detection file (repeatable)"
                                                   : "detection file");
        if (det_required) det->required();
        if (!det_repeatable) det->expected(0, 1);
        cmd->add_option("--delta-t", opt.delta_t, "slot length in seconds")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_flag("--weighted,!--no-weighted", opt.weighted,
                      "headline the class-balance weighted accuracy")
            ->capture_default_str();
        cmd->add_option("--jobs", opt.jobs, "videos evaluated in parallel")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
    };

    auto* evaluate = app.add_subcommand(
        "evaluate", "score a detection file against the ground truth");
    add_common(evaluate, true, false);
    evaluate->add_option("--out", opt.out_dir, "output directory")->required();

    auto* stream = app.add_subcommand(
        "stream", "replay a detection event stream (stdin unless --det is given)");
    add_common(stream, false, false);
    stream->add_option("--out", opt.out_dir, "also write the final per-video CSVs here");

    auto* baseline = app.add_subcommand("baseline", "generate a reference detector");
    add_common(baseline, false, false);
    baseline->add_option("--baseline", opt.baseline_kind, "one of all-bg, pm, random")
        ->required()
        ->check(CLI::IsMember({"all-bg", "pm", "random"}));
    baseline->add_option("--seed", opt.seed, "seed for the random baseline")
        ->capture_default_str();
    baseline->add_option("--rate", opt.rate_per_minute,
                         "expected detections per minute for the random baseline")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    baseline->add_option("--out", opt.out_dir, "output directory")->required();

    auto* summarize = app.add_subcommand(
        "summarize", "compare one or more detectors in a metrics table");
    add_common(summarize, true, true);
    summarize->add_option("--out", opt.out_dir, "also write comparison.csv here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (evaluate->parsed()) return cmd_evaluate(opt);
        if (stream->parsed()) return cmd_stream(opt);
        if (baseline->parsed()) return cmd_baseline(opt);
        return cmd_summarize(opt);
    } catch (const oadeval::StreamProtocolError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitStreamProtocol;
    } catch (const oadeval::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
