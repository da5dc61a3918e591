#include <filesystem>

#include "doctest.h"
#include "oadeval/baselines.hpp"
#include "oadeval/corpus_eval.hpp"
#include "support/proc.hpp"
#include "support/synthetic.hpp"

using namespace oadeval;

namespace {

Corpus two_video_corpus() {
    Corpus corpus;
    corpus.catalog.add("Run");
    corpus.videos.push_back({"v1", 10.0});
    corpus.videos.push_back({"v2", 10.0});
    corpus.annotations["v1"].push_back({{3.0, 7.0}, 1, std::nullopt});
    return corpus;
}

}  // namespace

TEST_CASE("evaluate_corpus aggregates per-video averages in order") {
    const auto corpus = two_video_corpus();
    DetectionMap detections;
    detections["v1"].push_back({{4.0, 8.0}, 1, 0.9});

    const auto summary = evaluate_corpus(corpus, detections, {{1.0, true}, 1, {}});
    REQUIRE(summary.per_video.size() == 2);
    CHECK(summary.per_video[0].video_id == "v1");
    CHECK(summary.per_video[0].avg_ia ==
          doctest::Approx(0.8568253968253968).epsilon(1e-12));
    CHECK(summary.per_video[1].avg_ia == 1.0);  // no detections, all-background video
    CHECK(summary.maia ==
          doctest::Approx((0.8568253968253968 + 1.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("evaluate_corpus output does not depend on the jobs setting") {
    std::mt19937_64 rng(456);
    testing::CorpusParams params;
    params.min_videos = 6;
    params.max_videos = 10;
    const auto corpus = testing::random_corpus(rng, params);
    const auto detections = testing::random_detections(rng, corpus, 6);

    testing::TempDir serial_dir;
    testing::TempDir parallel_dir;
    const auto serial =
        evaluate_corpus(corpus, detections, {{0.5, true}, 1, serial_dir.path()});
    const auto parallel =
        evaluate_corpus(corpus, detections, {{0.5, true}, 4, parallel_dir.path()});

    REQUIRE(serial.per_video.size() == parallel.per_video.size());
    for (std::size_t i = 0; i < serial.per_video.size(); ++i) {
        CHECK(serial.per_video[i].video_id == parallel.per_video[i].video_id);
        CHECK(serial.per_video[i].avg_ia == parallel.per_video[i].avg_ia);
        CHECK(serial.per_video[i].avg_weighted_ia == parallel.per_video[i].avg_weighted_ia);
    }
    CHECK(serial.maia == parallel.maia);

    for (const auto& entry : std::filesystem::directory_iterator(serial_dir.path())) {
        const auto name = entry.path().filename();
        CHECK(testing::read_file(entry.path()) ==
              testing::read_file(parallel_dir.path() / name));
    }
}

TEST_CASE("summarize_detector reports the four headline metrics") {
    const auto corpus = two_video_corpus();

    SUBCASE("perfect detections saturate everything") {
        DetectionMap pm;
        for (const auto& meta : corpus.videos) {
            auto dets = perfect_model(corpus.annotations_for(meta.video_id));
            if (!dets.empty()) pm[meta.video_id] = std::move(dets);
        }
        const auto report = summarize_detector("pm", corpus, pm, {{1.0, true}, 1, {}});
        CHECK(report.offline.map == 1.0);
        CHECK(report.offline.cap == 1.0);
        CHECK(report.online.maia == 1.0);
        CHECK(report.online.weighted_maia == 1.0);
    }

    SUBCASE("a silent detector zeroes the offline metrics") {
        const auto report = summarize_detector("all-bg", corpus, {}, {{1.0, true}, 1, {}});
        CHECK(report.offline.map == 0.0);
        CHECK(report.offline.cap == 0.0);
        CHECK(report.online.maia > 0.0);  // background slots still score
    }
}

TEST_CASE("sanitize_filename keeps ids filesystem safe") {
    CHECK(sanitize_filename("v1") == "v1");
    CHECK(sanitize_filename("show/ep_01") == "show_ep_01");
    CHECK(sanitize_filename("a b\tc") == "a_b_c");
    CHECK(sanitize_filename("A-Z.mp4") == "A-Z.mp4");
}
