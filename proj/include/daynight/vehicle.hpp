#pragma once

#include <cstdint>

#include "daynight/geometry.hpp"
#include "daynight/pointcloud.hpp"
#include "daynight/rational.hpp"
#include "daynight/rng.hpp"
#include "daynight/sensor_clock.hpp"

namespace daynight::sim {

struct VehicleParams {
    double wheelbase = 2.7;          // m
    double max_steer = 0.55;         // rad
    double max_accel = 3.0;          // m/s^2 (symmetric)
    double steer_tau = 0.15;         // s, steering first-order lag
    double accel_tau = 0.10;         // s, acceleration first-order lag
};

struct ActuationNoise {
    double accel_sigma = 0.0;        // m/s^2 per step
    double steer_sigma = 0.0;        // rad per step
};

/// Day/night condition: mode picks the camera rate; the multipliers realize
/// the slight actuation differences between the two runs.
struct RunCondition {
    Mode mode = Mode::day;
    double noise_scale = 1.0;        // scales actuation noise sigmas
    double friction = 1.0;           // scales achieved acceleration
};

struct ControlCommand {
    double accel = 0.0;              // m/s^2
    double steer = 0.0;              // rad
};

struct VehicleState {
    geom::Pose6D pose;
    double speed = 0.0;              // m/s, >= 0
    double steer = 0.0;              // rad, actual steering angle
    double accel = 0.0;              // m/s^2, lag state of the accel actuator
    double timestamp = 0.0;          // s
};

/// One kinematic-bicycle step. Commanded acceleration and steering pass
/// through first-order lags; zero-mean Gaussian actuation noise is scaled by
/// cond.noise_scale. The pose integrates the exact constant-curvature arc
/// for the step, so a constant steering angle traces a circle of radius
/// wheelbase / tan(steer) exactly.
VehicleState step_kinematics(const VehicleState& state, const ControlCommand& cmd, double dt,
                             const RunCondition& cond, const VehicleParams& params,
                             const ActuationNoise& noise, Rng& rng);

/// One LiDAR frame in the sensor frame.
struct LidarScan {
    field::PointCloud points;
    Rational timestamp;
    std::int64_t frame_index = 0;
};

struct ScanSimParams {
    double max_range = 200.0;        // m
    double min_elevation_deg = -25.0;
    double max_elevation_deg = 15.0;
    double range_sigma = 0.01;       // m; +-2 cm taken as a 2-sigma bound
    std::size_t max_points = 8000;   // stride decimation stands in for finite beam count
};

/// Samples field points within range / vertical FOV of the sensor pose,
/// expressed in the sensor frame, with Gaussian range noise along each ray.
/// Deterministic given the rng state. An empty scan (nothing in FOV) is valid.
LidarScan simulate_scan(const geom::Pose6D& sensor_pose, const field::PointCloud& field_cloud,
                        const ScanSimParams& params, Rng& rng);

} // namespace daynight::sim
