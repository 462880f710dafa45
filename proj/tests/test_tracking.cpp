#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "daynight/scenario_config.hpp"
#include "daynight/tracking.hpp"

using namespace daynight;
using track::MotionPlan;
using track::PidState;
using track::PursuitParams;
using track::Trajectory;

namespace {

Trajectory straight_trajectory(double length = 60.0, double speed = 4.0) {
    return track::trajectory_from_waypoints({{0.0, 0.0}, {length, 0.0}}, speed);
}

Trajectory circle_trajectory(double radius, double speed = 4.0) {
    std::vector<Eigen::Vector2d> waypoints;
    const int n = static_cast<int>(std::ceil(2.0 * M_PI * radius / 0.5));
    for (int i = 0; i <= n + 10; ++i) { // a bit over one lap
        const double a = 2.0 * M_PI * i / n;
        waypoints.emplace_back(radius * std::sin(a), radius * (1.0 - std::cos(a)));
    }
    return track::trajectory_from_waypoints(waypoints, speed);
}

} // namespace

TEST_CASE("trajectory authoring densifies and validates") {
    const Trajectory t = straight_trajectory(10.0, 2.0);
    t.validate();
    CHECK(t.arc_length() == doctest::Approx(10.0).epsilon(1e-9));
    CHECK(t.samples.front().t == doctest::Approx(0.0));
    CHECK(t.samples.back().t == doctest::Approx(5.0));
    for (std::size_t i = 1; i < t.samples.size(); ++i)
        REQUIRE(geom::position_distance(t.samples[i].pose, t.samples[i - 1].pose) <=
                0.25 + 1e-9);

    CHECK_THROWS_AS(track::trajectory_from_waypoints({}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(track::trajectory_from_waypoints({{0, 0}, {1, 0}}, 0.0),
                    std::invalid_argument);

    // Coincident waypoints collapse to a single sample instead of crashing.
    const Trajectory degenerate =
        track::trajectory_from_waypoints({{2.0, 3.0}, {2.0, 3.0}}, 1.0);
    REQUIRE(degenerate.size() == 1);
    CHECK(degenerate.samples[0].pose.x == doctest::Approx(2.0));
}

TEST_CASE("trajectory file round trip") {
    const Trajectory t = straight_trajectory(8.0, 2.0);
    const std::string path =
        (std::filesystem::temp_directory_path() / "daynight_traj.txt").string();
    save_trajectory(t, path);
    const Trajectory back = track::load_trajectory(path);
    REQUIRE(back.size() == t.size());
    for (std::size_t i = 0; i < t.size(); i += 7) {
        REQUIRE(back.samples[i].t == doctest::Approx(t.samples[i].t).epsilon(1e-9));
        REQUIRE(back.samples[i].pose.x == doctest::Approx(t.samples[i].pose.x).epsilon(1e-9));
    }
    std::filesystem::remove(path);
}

TEST_CASE("aligned vehicle on a straight course plans zero curvature") {
    const Trajectory t = straight_trajectory();
    const MotionPlan plan = pure_pursuit_plan(geom::Pose6D(5.0, 0.0, 0, 0, 0, 0.0), 4.0, t);
    CHECK(plan.bearing == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(plan.curvature == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(plan.target_velocity == doctest::Approx(4.0));
}

TEST_CASE("pursuit curvature on a circle equals 1/R") {
    for (const double radius : {10.0, 25.0, 50.0}) {
        const Trajectory t = circle_trajectory(radius);
        // Vehicle on the circle, heading tangent, partway around.
        const double a = 0.8;
        const geom::Pose6D pose(radius * std::sin(a), radius * (1.0 - std::cos(a)), 0.0, 0.0,
                                0.0, a);
        const MotionPlan plan = pure_pursuit_plan(pose, 4.0, t);
        CHECK(plan.curvature == doctest::Approx(1.0 / radius).epsilon(0.02));
    }
}

TEST_CASE("curvature-chord identity holds on every planning step") {
    Rng rng(15);
    const Trajectory t = circle_trajectory(20.0);
    for (int i = 0; i < 200; ++i) {
        const geom::Pose6D pose(rng.uniform(-2.0, 22.0), rng.uniform(-2.0, 22.0), 0.0, 0.0,
                                0.0, rng.uniform(-M_PI, M_PI));
        MotionPlan plan;
        try {
            plan = pure_pursuit_plan(pose, rng.uniform(0.0, 8.0), t);
        } catch (const track::OffTrajectoryError&) {
            continue;
        }
        REQUIRE(plan.curvature * plan.chord ==
                doctest::Approx(2.0 * std::sin(plan.bearing)).epsilon(1e-12));
    }
}

TEST_CASE("nearest-sample selection matches an exhaustive scan") {
    Rng rng(29);
    const Trajectory t = circle_trajectory(15.0);
    for (int i = 0; i < 100; ++i) {
        const geom::Pose6D pose(rng.uniform(0.0, 15.0), rng.uniform(0.0, 15.0), 0.0, 0.0, 0.0,
                                0.0);
        // Oracle: independent exhaustive minimum with explicit arithmetic.
        double best = 1e300;
        std::size_t best_i = 0;
        for (std::size_t k = 0; k < t.samples.size(); ++k) {
            const double dx = t.samples[k].pose.x - pose.x;
            const double dy = t.samples[k].pose.y - pose.y;
            const double d = std::sqrt(dx * dx + dy * dy);
            if (d < best) {
                best = d;
                best_i = k;
            }
        }
        if (best > 5.0) {
            CHECK_THROWS_AS(pure_pursuit_plan(pose, 4.0, t), track::OffTrajectoryError);
            continue;
        }
        const MotionPlan plan = pure_pursuit_plan(pose, 0.0, t); // lookahead floor only
        // With zero speed the lookahead clamps to min_lookahead; walk the same
        // arc from the oracle's nearest index.
        double along = 0.0;
        std::size_t target = best_i;
        while (target + 1 < t.samples.size() && along < 2.0) {
            along += geom::position_distance(t.samples[target].pose,
                                             t.samples[target + 1].pose);
            ++target;
        }
        REQUIRE(plan.target_pose.x == t.samples[target].pose.x);
        REQUIRE(plan.target_pose.y == t.samples[target].pose.y);
    }
}

TEST_CASE("off-trajectory abort triggers exactly beyond the offset bound") {
    const Trajectory t = straight_trajectory();
    CHECK_NOTHROW(pure_pursuit_plan(geom::Pose6D(10.0, 4.99, 0, 0, 0, 0), 4.0, t));
    CHECK_THROWS_AS(pure_pursuit_plan(geom::Pose6D(10.0, 5.01, 0, 0, 0, 0), 4.0, t),
                    track::OffTrajectoryError);
}

TEST_CASE("pid: zero error and zero curvature command nothing") {
    MotionPlan plan;
    plan.target_velocity = 4.0;
    plan.curvature = 0.0;
    const auto [cmd, next] = pid_control(plan, 4.0, PidState{}, 0.05);
    CHECK(cmd.accel == doctest::Approx(0.0));
    CHECK(cmd.steer == doctest::Approx(0.0));
    CHECK_FALSE(next.fresh);
}

TEST_CASE("pid: fresh state responds with the pure proportional term") {
    MotionPlan plan;
    plan.target_velocity = 5.0;
    const auto [cmd, next] = pid_control(plan, 4.0, PidState{}, 0.05);
    CHECK(cmd.accel == doctest::Approx(0.8)); // Kp * 1 exactly, integral applies next step
    CHECK(next.integral == doctest::Approx(0.05));
    CHECK(next.prev_error == doctest::Approx(1.0));
}

TEST_CASE("pid: integral is clamped and steering is rate limited") {
    track::ControlParams params;
    PidState pid;
    MotionPlan plan;
    plan.target_velocity = 100.0; // force windup
    for (int i = 0; i < 2000; ++i) pid = pid_control(plan, 0.0, pid, 0.05, params).second;
    CHECK(pid.integral == doctest::Approx(params.integral_limit));

    plan.curvature = 10.0; // step steering demand
    const auto [cmd, next] = pid_control(plan, 0.0, PidState{}, 0.05, params);
    CHECK(std::abs(cmd.steer) <= params.steer_rate_limit * 0.05 + 1e-12);
    CHECK(std::abs(cmd.accel) <= params.max_accel);
}

TEST_CASE("pid: straight-line step response settles fast with low overshoot") {
    // Closed loop bicycle + PID from rest toward 4 m/s on a straight course.
    const Trajectory t = straight_trajectory(120.0, 4.0);
    sim::VehicleState state;
    state.pose = t.samples[0].pose;
    state.speed = 0.0;
    PidState pid;
    Rng rng(0);
    const double dt = 0.05;
    double peak = 0.0;
    double t95 = -1.0;
    for (int k = 0; k < 200; ++k) {
        const MotionPlan plan = pure_pursuit_plan(state.pose, state.speed, t);
        const auto [cmd, next_pid] = pid_control(plan, state.speed, pid, dt);
        pid = next_pid;
        state = step_kinematics(state, cmd, dt, sim::RunCondition{}, sim::VehicleParams{},
                                sim::ActuationNoise{}, rng);
        peak = std::max(peak, state.speed);
        if (t95 < 0.0 && state.speed >= 0.95 * 4.0) t95 = (k + 1) * dt;
    }
    REQUIRE(t95 > 0.0);
    CHECK(t95 <= 3.0);
    CHECK(peak < 4.0 * 1.10);
}

TEST_CASE("single-sample trajectory completes immediately") {
    const Trajectory t = track::trajectory_from_waypoints({{3.0, 4.0}}, 2.0);
    REQUIRE(t.size() == 1);
    field::PointCloud cloud;
    cloud.points.push_back({0.0, 0.0, 0.0, 1.0});
    const auto result = track::track_trajectory(t, sim::RunCondition{}, cloud,
                                                field::NdtGrid(), sim::SensorClock{}, 1,
                                                track::TrackingConfig{});
    REQUIRE(result.realized.size() == 1);
    CHECK(result.realized.samples[0].pose.x == doctest::Approx(3.0));
    CHECK(result.lidar_ticks.size() == 1);
    CHECK_FALSE(result.camera_triggers.empty());
}

TEST_CASE("noise-free closed loop stays within 5 cm of the curved course") {
    auto cfg = pipe::load_scenario(std::string(DAYNIGHT_CONFIG_DIR) + "/curved_course.json");
    cfg.noise = pipe::NoiseConfig{};
    cfg.noise.lidar_range_sigma = 0.0;
    cfg.noise.accel_sigma = 0.0;
    cfg.noise.steer_sigma = 0.0;
    cfg.scan.range_sigma = 0.0;

    const auto cloud = field::synthesize_field(cfg.layout, cfg.sampling);
    const auto grid = field::build_ndt_grid(cloud, cfg.ndt);
    const auto desired = track::trajectory_from_waypoints(
        cfg.trajectory.waypoints, cfg.trajectory.speed_mps, cfg.trajectory.spacing);

    const auto run =
        track::track_trajectory(desired, pipe::run_condition(cfg, sim::Mode::day), cloud, grid,
                                cfg.clock, cfg.seed, pipe::tracking_config(cfg));

    // Cross-track error: perpendicular distance from each realized position
    // to the desired path (point-to-segment over the polyline).
    double max_err = 0.0;
    for (const auto& s : run.realized.samples) {
        double best = 1e300;
        for (std::size_t i = 1; i < desired.samples.size(); ++i) {
            const Eigen::Vector2d a(desired.samples[i - 1].pose.x,
                                    desired.samples[i - 1].pose.y);
            const Eigen::Vector2d b(desired.samples[i].pose.x, desired.samples[i].pose.y);
            const Eigen::Vector2d q(s.pose.x, s.pose.y);
            const Eigen::Vector2d ab = b - a;
            const double t = std::clamp(ab.dot(q - a) / ab.squaredNorm(), 0.0, 1.0);
            best = std::min(best, (q - (a + t * ab)).norm());
        }
        max_err = std::max(max_err, best);
    }
    CHECK(max_err < 0.05);
}

TEST_CASE("day and night runs coincide within 10 cm over 95 percent of arc") {
    const auto cfg =
        pipe::load_scenario(std::string(DAYNIGHT_CONFIG_DIR) + "/curved_course.json");
    const auto cloud = field::synthesize_field(cfg.layout, cfg.sampling);
    const auto grid = field::build_ndt_grid(cloud, cfg.ndt);
    const auto desired = track::trajectory_from_waypoints(
        cfg.trajectory.waypoints, cfg.trajectory.speed_mps, cfg.trajectory.spacing);
    const auto tc = pipe::tracking_config(cfg);

    const auto day = track::track_trajectory(desired, pipe::run_condition(cfg, sim::Mode::day),
                                             cloud, grid, cfg.clock, cfg.seed, tc);
    const auto night = track::track_trajectory(
        desired, pipe::run_condition(cfg, sim::Mode::night), cloud, grid, cfg.clock, cfg.seed,
        tc);

    REQUIRE(day.realized.size() == night.realized.size());
    // Realized timestamps coincide exactly with the LiDAR clock ticks.
    for (std::size_t k = 0; k < day.lidar_ticks.size(); ++k) {
        REQUIRE(day.lidar_ticks[k] == cfg.clock.lidar_tick(static_cast<std::int64_t>(k)));
        REQUIRE(day.realized.samples[k].t == day.lidar_ticks[k].to_double());
    }

    std::size_t within = 0;
    for (const auto& s : day.realized.samples) {
        double best = 1e300;
        for (const auto& n : night.realized.samples)
            best = std::min(best, geom::position_distance(s.pose, n.pose));
        if (best < 0.10) ++within;
    }
    CHECK(static_cast<double>(within) / day.realized.size() >= 0.95);
}
