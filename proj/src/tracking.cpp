#include "daynight/tracking.hpp"

#include <cmath>
#include <string>

namespace daynight::track {

MotionPlan pure_pursuit_plan(const geom::Pose6D& pose, double speed, const Trajectory& desired,
                             const PursuitParams& params) {
    desired.validate();

    std::size_t nearest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < desired.samples.size(); ++i) {
        const double d = geom::position_distance(pose, desired.samples[i].pose);
        if (d < best) {
            best = d;
            nearest = i;
        }
    }
    if (best > params.max_offset)
        throw OffTrajectoryError("pure_pursuit_plan: vehicle " + std::to_string(best) +
                                 " m from the desired trajectory");

    const double lookahead = std::clamp(speed * params.lookahead_gain, params.min_lookahead,
                                        params.max_lookahead);
    std::size_t target = nearest;
    double along = 0.0;
    while (target + 1 < desired.samples.size() && along < lookahead) {
        along += geom::position_distance(desired.samples[target].pose,
                                         desired.samples[target + 1].pose);
        ++target;
    }

    const TrajectorySample& goal = desired.samples[target];
    MotionPlan plan;
    plan.target_pose = goal.pose;
    plan.target_velocity = goal.velocity;

    const double dx = goal.pose.x - pose.x;
    const double dy = goal.pose.y - pose.y;
    plan.chord = std::hypot(dx, dy);
    plan.bearing = geom::wrap_angle(std::atan2(dy, dx) - pose.yaw);
    plan.curvature = plan.chord < 1e-9 ? 0.0 : 2.0 * std::sin(plan.bearing) / plan.chord;
    return plan;
}

std::pair<sim::ControlCommand, PidState> pid_control(const MotionPlan& plan, double speed,
                                                     const PidState& pid, double dt,
                                                     const ControlParams& params) {
    if (dt <= 0.0) throw std::invalid_argument("pid_control: dt must be positive");

    const double error = plan.target_velocity - speed;
    const double derivative = pid.fresh ? 0.0 : (error - pid.prev_error) / dt;

    sim::ControlCommand cmd;
    cmd.accel = std::clamp(params.kp * error + params.ki * pid.integral + params.kd * derivative,
                           -params.max_accel, params.max_accel);

    const double steer_raw = std::atan(params.wheelbase * plan.curvature);
    const double max_delta = params.steer_rate_limit * dt;
    cmd.steer = std::clamp(std::clamp(steer_raw, pid.prev_steer - max_delta,
                                      pid.prev_steer + max_delta),
                           -params.max_steer, params.max_steer);

    PidState next;
    next.integral = std::clamp(pid.integral + error * dt, -params.integral_limit,
                               params.integral_limit);
    next.prev_error = error;
    next.prev_steer = cmd.steer;
    next.fresh = false;
    return {cmd, next};
}

namespace {

geom::Pose6D sensor_pose_of(const geom::Pose6D& vehicle_pose, double sensor_height) {
    geom::Pose6D p = vehicle_pose;
    p.z += sensor_height;
    return p;
}

geom::Pose6D vehicle_pose_of(const geom::Pose6D& sensor_pose, double sensor_height) {
    geom::Pose6D p = sensor_pose;
    p.z -= sensor_height;
    return p;
}

} // namespace

RunResult track_trajectory(const Trajectory& desired, const sim::RunCondition& cond,
                           const field::PointCloud& field_cloud, const field::NdtGrid& grid,
                           const sim::SensorClock& clock, std::uint64_t seed,
                           const TrackingConfig& config) {
    desired.validate();

    RunResult result;

    // Degenerate desired trajectory: nothing to track.
    if (desired.size() == 1) {
        TrajectorySample s = desired.samples[0];
        s.t = clock.start.to_double();
        result.realized.samples.push_back(s);
        result.lidar_ticks.push_back(clock.start);
        result.camera_triggers = camera_trigger_times(clock, cond.mode, config.duration);
        return result;
    }

    const char* suffix = cond.mode == sim::Mode::day ? "day" : "night";
    Rng rng_actuation = Rng::stream(seed, std::string("actuation-") + suffix);
    Rng rng_lidar = Rng::stream(seed, std::string("lidar-noise-") + suffix);

    sim::VehicleState state;
    state.pose = desired.samples[0].pose;
    state.speed = desired.samples[0].velocity;
    state.timestamp = clock.start.to_double();

    geom::Pose6D estimated = state.pose;
    PidState pid;
    const double dt = 1.0 / clock.lidar_fps;
    const std::int64_t n_ticks = clock.tick_count(clock.lidar_fps, config.duration);

    for (std::int64_t k = 0; k < n_ticks; ++k) {
        const Rational tick = clock.lidar_tick(k);

        const sim::LidarScan scan = [&] {
            sim::LidarScan s = simulate_scan(sensor_pose_of(state.pose, config.sensor_height),
                                             field_cloud, config.scan, rng_lidar);
            s.timestamp = tick;
            s.frame_index = k;
            return s;
        }();

        const geom::Pose6D est_sensor = loc::localize_frame(
            scan, grid, sensor_pose_of(estimated, config.sensor_height), config.registration);
        estimated = vehicle_pose_of(est_sensor, config.sensor_height);

        result.lidar_ticks.push_back(tick);
        result.realized.samples.push_back({tick.to_double(), estimated, state.speed});

        const MotionPlan plan = pure_pursuit_plan(estimated, state.speed, desired,
                                                  config.pursuit);
        auto [cmd, next_pid] = pid_control(plan, state.speed, pid, dt, config.control);
        pid = next_pid;

        result.log.push_back({k, tick, state.pose, estimated, state.speed, cmd});

        state = step_kinematics(state, cmd, dt, cond, config.vehicle, config.actuation_noise,
                                rng_actuation);
    }

    result.camera_triggers = camera_trigger_times(clock, cond.mode, config.duration);
    return result;
}

} // namespace daynight::track
