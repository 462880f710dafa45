#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "daynight/matching.hpp"
#include "daynight/report.hpp"
#include "daynight/rng.hpp"

using namespace daynight;
using match::AnomalyLog;
using match::MatchedPair;
using match::RunStreams;

namespace {

std::vector<Rational> ticks(int fps, int count) {
    std::vector<Rational> out;
    for (int k = 0; k < count; ++k) out.emplace_back(k, fps);
    return out;
}

/// Streams for a straight-line run: poses at 20 Hz, cameras at the given rate.
RunStreams line_streams(int camera_fps, int n_camera, int n_poses, double speed,
                        double x_offset = 0.0, double y_offset = 0.0) {
    RunStreams s;
    s.camera_times = ticks(camera_fps, n_camera);
    s.pose_times = ticks(20, n_poses);
    for (int k = 0; k < n_poses; ++k)
        s.poses.push_back(geom::Pose6D(x_offset + speed * k / 20.0, y_offset, 0, 0, 0, 0));
    return s;
}

} // namespace

TEST_CASE("psi maps an exact hit to its pose index") {
    const auto psi = match::build_psi({Rational(1, 10)}, ticks(20, 10));
    REQUIRE(psi.pose_index.size() == 1);
    CHECK(psi.pose_index[0] == 2);
}

TEST_CASE("psi resolves ties to the earlier index") {
    // 0.075 s sits exactly between pose ticks 0.05 and 0.10.
    const auto psi = match::build_psi({Rational(3, 40)}, ticks(20, 10));
    CHECK(psi.pose_index[0] == 1);
}

TEST_CASE("psi equals the exhaustive nearest scan on random streams") {
    Rng rng(111);
    for (int trial = 0; trial < 20; ++trial) {
        // Random rational camera stream against a random pose stream.
        const int cam_fps = 3 + static_cast<int>(rng.next_u64() % 14);
        const int pose_fps = 5 + static_cast<int>(rng.next_u64() % 25);
        const auto cams = ticks(cam_fps, 40);
        const auto poses = ticks(pose_fps, 120);
        const auto psi = match::build_psi(cams, poses);
        for (std::size_t q = 0; q < cams.size(); ++q) {
            std::size_t best = 0;
            for (std::size_t i = 1; i < poses.size(); ++i)
                if ((poses[i] - cams[q]).abs() < (poses[best] - cams[q]).abs()) best = i;
            REQUIRE(psi.pose_index[q] == best);
        }
    }
}

TEST_CASE("psi rebuilt from the same streams is identical") {
    const auto a = match::build_psi(ticks(6, 60), ticks(20, 200));
    const auto b = match::build_psi(ticks(6, 60), ticks(20, 200));
    CHECK(a.pose_index == b.pose_index);
}

TEST_CASE("psi rejects empty or unsorted input") {
    CHECK_THROWS_AS(match::build_psi({}, ticks(20, 10)), std::invalid_argument);
    CHECK_THROWS_AS(match::build_psi(ticks(10, 5), {}), std::invalid_argument);
    CHECK_THROWS_AS(match::build_psi({Rational(1, 10), Rational(1, 20)}, ticks(20, 10)),
                    std::invalid_argument);
}

TEST_CASE("identical runs match every day frame with zero error") {
    // Night poses identical to day poses: the same streams on both sides.
    const RunStreams day = line_streams(10, 100, 200, 4.0);
    const RunStreams night_same = day;
    const auto result = match::match_pairs(day, night_same, 0.05);
    CHECK(result.pairs.size() == day.camera_times.size());
    CHECK(result.unmatched_day_frames.empty());
    for (const auto& p : result.pairs) REQUIRE(p.position_error <= 1e-12);
}

TEST_CASE("uniform 3 cm shift matches every frame at exactly 3 cm") {
    // Same stream structure, night poses displaced laterally by 0.03 m.
    const RunStreams day = line_streams(10, 40, 200, 4.0);
    const RunStreams night = line_streams(10, 40, 200, 4.0, 0.0, 0.03);
    const auto result = match::match_pairs(day, night, 0.05);
    CHECK(result.pairs.size() == day.camera_times.size());
    for (const auto& p : result.pairs) {
        REQUIRE(p.position_error == doctest::Approx(0.03).epsilon(1e-12));
        REQUIRE(p.position_error <= 0.05);
    }
}

TEST_CASE("uniform 10 cm shift yields zero matches at delta = 5 cm") {
    const RunStreams day = line_streams(10, 40, 200, 4.0);
    const RunStreams night = line_streams(10, 40, 200, 4.0, 0.0, 0.10);
    const auto result = match::match_pairs(day, night, 0.05);
    CHECK(result.pairs.empty());
    CHECK(result.unmatched_day_frames.size() == day.camera_times.size());
}

TEST_CASE("empty night run leaves every day frame unmatched") {
    const RunStreams day = line_streams(10, 20, 100, 4.0);
    RunStreams night;
    const auto result = match::match_pairs(day, night, 0.05);
    CHECK(result.pairs.empty());
    CHECK(result.unmatched_day_frames.size() == 20);
}

TEST_CASE("argmin equals brute force and the matched set is monotone in delta") {
    Rng rng(77);
    RunStreams day = line_streams(10, 60, 300, 4.0);
    RunStreams night = line_streams(6, 36, 300, 4.0);
    for (auto& p : night.poses) {
        p.x += rng.gaussian(0.0, 0.03);
        p.y += rng.gaussian(0.0, 0.03);
    }

    const auto psi_day = match::build_psi(day.camera_times, day.pose_times);
    const auto psi_night = match::build_psi(night.camera_times, night.pose_times);

    const auto result = match::match_pairs(day, night, 0.05);
    for (const auto& pair : result.pairs) {
        // Brute force re-minimization, independent arithmetic.
        const auto& dp = day.poses[psi_day.pose_index[pair.day_frame]];
        double best = 1e300;
        std::int64_t best_f = -1;
        for (std::size_t f = 0; f < night.camera_times.size(); ++f) {
            const auto& np = night.poses[psi_night.pose_index[f]];
            const double dx = dp.x - np.x, dy = dp.y - np.y, dz = dp.z - np.z;
            const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
            if (d < best) {
                best = d;
                best_f = static_cast<std::int64_t>(f);
            }
        }
        REQUIRE(pair.night_frame == best_f);
        REQUIRE(pair.position_error == doctest::Approx(best).epsilon(1e-12));
        REQUIRE(pair.position_error <= 0.05);
    }

    const auto tight = match::match_pairs(day, night, 0.02);
    const auto loose = match::match_pairs(day, night, 0.08);
    CHECK(tight.pairs.size() <= result.pairs.size());
    CHECK(result.pairs.size() <= loose.pairs.size());
    for (const auto& p : tight.pairs) {
        const bool present = std::any_of(result.pairs.begin(), result.pairs.end(),
                                         [&](const MatchedPair& q) {
                                             return q.day_frame == p.day_frame &&
                                                    q.night_frame == p.night_frame;
                                         });
        REQUIRE(present);
    }
}

TEST_CASE("refinement: clean input passes through untouched") {
    const RunStreams day = line_streams(10, 30, 150, 4.0);
    const auto result = match::match_pairs(day, day, 0.05);
    const auto refined = match::refine_pairs(result.pairs, AnomalyLog{});
    CHECK(refined.kept.size() == result.pairs.size());
    CHECK(refined.flags.empty());
}

TEST_CASE("refinement removes anomaly-tagged pairs") {
    const RunStreams day = line_streams(10, 30, 150, 4.0);
    const auto result = match::match_pairs(day, day, 0.05);
    AnomalyLog anomalies;
    anomalies.day_frames.insert(result.pairs[3].day_frame);
    anomalies.night_frames.insert(result.pairs[7].night_frame);
    const auto refined = match::refine_pairs(result.pairs, anomalies);
    CHECK(refined.kept.size() == result.pairs.size() - 2);
    REQUIRE(refined.flags.size() == 2);
    CHECK(refined.flags[0].reason == match::RefineReason::dynamic_object_mismatch);
    for (const auto& p : refined.kept) {
        REQUIRE(anomalies.day_frames.count(p.day_frame) == 0);
        REQUIRE(anomalies.night_frames.count(p.night_frame) == 0);
    }
}

TEST_CASE("refinement removes the decimeter band from a diagnostic set") {
    RunStreams day = line_streams(10, 40, 200, 4.0);
    RunStreams night = line_streams(6, 24, 200, 4.0, 0.0, 0.0);
    // Shift a contiguous block of night poses by 15 cm: diagnostic matching at
    // 0.30 m still pairs them, refinement must drop them.
    for (std::size_t i = 60; i < 140; ++i) night.poses[i].y += 0.15;
    const auto diag = match::match_pairs(day, night, 0.30);
    const auto refined = match::refine_pairs(diag.pairs, AnomalyLog{});
    std::size_t decimeter_flags = 0;
    for (const auto& f : refined.flags)
        if (f.reason == match::RefineReason::decimeter_error) {
            ++decimeter_flags;
            REQUIRE(f.position_error >= 0.10);
        }
    CHECK(decimeter_flags > 0);
    for (const auto& p : refined.kept) REQUIRE(p.position_error < 0.10);
}

TEST_CASE("anomaly rate shows up in the kept/total ratio") {
    const RunStreams day = line_streams(10, 200, 1000, 4.0);
    const auto result = match::match_pairs(day, day, 0.05);
    REQUIRE(result.pairs.size() == 200);

    AnomalyLog anomalies;
    Rng rng(55);
    for (std::int64_t q = 0; q < 200; ++q)
        if (rng.bernoulli(0.05)) anomalies.day_frames.insert(q);
    const auto refined = match::refine_pairs(result.pairs, anomalies);

    // Counting oracle: exactly the tagged day frames are gone.
    CHECK(refined.kept.size() == 200 - anomalies.day_frames.size());
    const double ratio = static_cast<double>(refined.kept.size()) / 200.0;
    CHECK(ratio == doctest::Approx(0.95).epsilon(0.05));
}

TEST_CASE("uniqueness mode keeps the best pair per night frame") {
    // Two day frames forced onto the same night frame.
    RunStreams day = line_streams(10, 2, 40, 0.0);  // stationary: both map to pose 0
    RunStreams night = line_streams(6, 1, 40, 0.0);
    day.poses[0].x = 0.01;  // frame 0 error 0.01
    // day frame 1 maps to pose index 2 (t=0.1 s), also near night pose 0
    day.poses[2].x = 0.03;  // frame 1 error 0.03

    const auto result = match::match_pairs(day, night, 0.05);
    REQUIRE(result.pairs.size() == 2);
    CHECK(result.pairs[0].night_frame == result.pairs[1].night_frame);

    match::RefineOptions options;
    options.unique_night_frames = true;
    const auto refined = match::refine_pairs(result.pairs, AnomalyLog{}, options);
    REQUIRE(refined.kept.size() == 1);
    CHECK(refined.kept[0].position_error == doctest::Approx(0.01));
    REQUIRE(refined.flags.size() == 1);
    CHECK(refined.flags[0].reason == match::RefineReason::duplicate_target);
}

TEST_CASE("alignment report on an empty pair set") {
    const auto report = match::alignment_report({}, 0);
    CHECK(report.yield == 0.0);
    CHECK(report.position_error.count == 0);
}

TEST_CASE("alignment report with constant errors") {
    std::vector<MatchedPair> pairs(5);
    for (auto& p : pairs) p.position_error = 0.02;
    const auto report = match::alignment_report(pairs, 10);
    CHECK(report.yield == doctest::Approx(0.5));
    CHECK(report.position_error.mean == doctest::Approx(0.02));
    CHECK(report.position_error.median == doctest::Approx(0.02));
    CHECK(report.position_error.p95 == doctest::Approx(0.02));
    CHECK(report.position_error.max == doctest::Approx(0.02));
}

TEST_CASE("alignment report statistics match a naive reimplementation") {
    Rng rng(202);
    std::vector<MatchedPair> pairs;
    for (int i = 0; i < 137; ++i) {
        MatchedPair p;
        p.position_error = rng.uniform(0.0, 0.05);
        p.angular_error = rng.uniform(0.0, 0.01);
        p.tags.road_scene = i % 2 == 0 ? "curved_road" : "open_road";
        p.tags.lighting = "no_streetlight";
        pairs.push_back(p);
    }
    const auto report = match::alignment_report(pairs, 200);

    // Naive second pass.
    std::vector<double> errs;
    for (const auto& p : pairs) errs.push_back(p.position_error);
    std::sort(errs.begin(), errs.end());
    double sum = 0.0;
    for (double e : errs) sum += e;
    CHECK(report.position_error.mean == doctest::Approx(sum / errs.size()).epsilon(1e-12));
    CHECK(report.position_error.max == doctest::Approx(errs.back()));
    const std::size_t n = errs.size();
    const double median = n % 2 ? errs[n / 2] : 0.5 * (errs[n / 2 - 1] + errs[n / 2]);
    CHECK(report.position_error.median == doctest::Approx(median));
    const double p95 = errs[static_cast<std::size_t>(std::ceil(0.95 * n)) - 1];
    CHECK(report.position_error.p95 == doctest::Approx(p95));
    CHECK(report.yield == doctest::Approx(137.0 / 200.0));
    CHECK(report.by_tag.size() == 2);
    std::size_t tagged = 0;
    for (const auto& [tag, stats] : report.by_tag) tagged += stats.count;
    CHECK(tagged == pairs.size());
}
