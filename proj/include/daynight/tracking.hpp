#pragma once

#include <stdexcept>
#include <vector>

#include "daynight/localization.hpp"
#include "daynight/sensor_clock.hpp"
#include "daynight/trajectory.hpp"
#include "daynight/vehicle.hpp"

namespace daynight::track {

/// Raised when the vehicle drifts farther than the allowed offset from every
/// trajectory sample; the run aborts, mirroring a failed tracking session.
struct OffTrajectoryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PursuitParams {
    double lookahead_gain = 1.5;     // s: lookahead = gain * speed ...
    double min_lookahead = 2.0;      // ... clamped into [min, max] meters
    double max_lookahead = 8.0;
    double max_offset = 5.0;         // m, off-trajectory abort threshold
};

struct MotionPlan {
    geom::Pose6D target_pose;
    double target_velocity = 0.0;    // m/s, >= 0
    double curvature = 0.0;          // 1/m, signed pursuit curvature
    double chord = 0.0;              // m, straight-line distance to the target
    double bearing = 0.0;            // rad, heading-relative bearing to the target
};

/// Pure pursuit planning step: nearest sample by Euclidean distance, then the
/// sample one lookahead arc ahead along the trajectory. The pursuit curvature
/// satisfies curvature * chord = 2 * sin(bearing) by construction.
MotionPlan pure_pursuit_plan(const geom::Pose6D& pose, double speed, const Trajectory& desired,
                             const PursuitParams& params = {});

struct ControlParams {
    double kp = 0.8;                 // longitudinal PID gains
    double ki = 0.1;
    double kd = 0.05;
    double integral_limit = 2.0;     // anti-windup clamp on the integral term
    double steer_rate_limit = 0.7;   // rad/s
    double wheelbase = 2.7;          // m, for curvature -> steering
    double max_accel = 3.0;          // m/s^2
    double max_steer = 0.55;         // rad
};

struct PidState {
    double integral = 0.0;
    double prev_error = 0.0;
    double prev_steer = 0.0;
    bool fresh = true;
};

/// Longitudinal PID on velocity error plus geometric steering from the
/// pursuit curvature with a steering-rate limiter. The integral accumulates
/// after the output is formed, so a fresh state responds with the pure
/// proportional term.
std::pair<sim::ControlCommand, PidState> pid_control(const MotionPlan& plan, double speed,
                                                     const PidState& pid, double dt,
                                                     const ControlParams& params = {});

struct TrackingConfig {
    sim::VehicleParams vehicle;
    sim::ActuationNoise actuation_noise;
    sim::ScanSimParams scan;
    PursuitParams pursuit;
    ControlParams control;
    loc::RegistrationParams registration;
    double sensor_height = 1.8;      // m, LiDAR mount above the vehicle origin
    Rational duration{10, 1};        // s, run length
};

/// One line of the run log: everything known at one LiDAR tick.
struct RunRecord {
    std::int64_t frame_index = 0;
    Rational timestamp;
    geom::Pose6D true_pose;
    geom::Pose6D estimated_pose;
    double speed = 0.0;
    sim::ControlCommand command;
};

struct RunResult {
    Trajectory realized;                       // estimated poses at LiDAR ticks
    std::vector<Rational> lidar_ticks;
    std::vector<sim::CameraTrigger> camera_triggers;
    std::vector<RunRecord> log;
};

/// Closed-loop trajectory tracking at the LiDAR rate: simulate scan ->
/// localize -> pure pursuit -> PID -> kinematic step. Off-trajectory and
/// localization failures propagate as exceptions.
RunResult track_trajectory(const Trajectory& desired, const sim::RunCondition& cond,
                           const field::PointCloud& field_cloud, const field::NdtGrid& grid,
                           const sim::SensorClock& clock, std::uint64_t seed,
                           const TrackingConfig& config);

} // namespace daynight::track
