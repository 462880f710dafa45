#include "daynight/vehicle.hpp"

#include <cmath>

namespace daynight::sim {

VehicleState step_kinematics(const VehicleState& state, const ControlCommand& cmd, double dt,
                             const RunCondition& cond, const VehicleParams& params,
                             const ActuationNoise& noise, Rng& rng) {
    if (dt <= 0.0) throw std::invalid_argument("step_kinematics: dt must be positive");

    VehicleState next = state;

    // Actuator lags (exact first-order discretization).
    const double beta_s = 1.0 - std::exp(-dt / params.steer_tau);
    const double beta_a = 1.0 - std::exp(-dt / params.accel_tau);
    const double steer_cmd = std::clamp(cmd.steer, -params.max_steer, params.max_steer);
    const double accel_cmd = std::clamp(cmd.accel, -params.max_accel, params.max_accel);
    next.steer = std::clamp(state.steer + (steer_cmd - state.steer) * beta_s,
                            -params.max_steer, params.max_steer);
    next.accel = state.accel + (accel_cmd - state.accel) * beta_a;

    // Applied values: execution noise perturbs each step without
    // accumulating into the actuator states.
    const double steer_applied =
        std::clamp(next.steer + rng.gaussian(0.0, noise.steer_sigma * cond.noise_scale),
                   -params.max_steer, params.max_steer);
    const double accel_applied =
        next.accel * cond.friction + rng.gaussian(0.0, noise.accel_sigma * cond.noise_scale);

    const double v0 = state.speed;
    next.speed = std::max(0.0, v0 + accel_applied * dt);
    const double arc = 0.5 * (v0 + next.speed) * dt;

    const double yaw = state.pose.yaw;
    const double tan_steer = std::tan(steer_applied);
    if (std::abs(tan_steer) < 1e-9) {
        next.pose.x += arc * std::cos(yaw);
        next.pose.y += arc * std::sin(yaw);
    } else {
        // Constant-curvature arc over the step.
        const double radius = params.wheelbase / tan_steer;
        const double dyaw = arc / radius;
        next.pose.x += radius * (std::sin(yaw + dyaw) - std::sin(yaw));
        next.pose.y += radius * (std::cos(yaw) - std::cos(yaw + dyaw));
        next.pose.yaw = geom::wrap_angle(yaw + dyaw);
    }
    next.timestamp = state.timestamp + dt;
    return next;
}

LidarScan simulate_scan(const geom::Pose6D& sensor_pose, const field::PointCloud& field_cloud,
                        const ScanSimParams& params, Rng& rng) {
    if (field_cloud.empty()) throw std::invalid_argument("simulate_scan: empty field");

    const geom::Htm world_from_sensor = geom::pose_to_htm(sensor_pose);
    const geom::Htm sensor_from_world = geom::invert(world_from_sensor);
    const double min_el = params.min_elevation_deg * M_PI / 180.0;
    const double max_el = params.max_elevation_deg * M_PI / 180.0;

    // Pass 1: indices of points inside range and vertical FOV.
    std::vector<std::size_t> visible;
    visible.reserve(field_cloud.size());
    std::vector<Eigen::Vector3d> local;
    local.reserve(field_cloud.size());
    for (std::size_t i = 0; i < field_cloud.size(); ++i) {
        const Eigen::Vector3d p = sensor_from_world.apply(field_cloud.points[i].xyz());
        const double range = p.norm();
        if (range < 1e-9 || range > params.max_range) continue;
        const double elevation = std::asin(p.z() / range);
        if (elevation < min_el || elevation > max_el) continue;
        visible.push_back(i);
        local.push_back(p);
    }

    // Pass 2: deterministic stride decimation, then per-ray range noise.
    LidarScan scan;
    const std::size_t stride =
        visible.empty() ? 1 : std::max<std::size_t>(1, (visible.size() + params.max_points - 1) /
                                                           params.max_points);
    scan.points.points.reserve(visible.size() / stride + 1);
    for (std::size_t v = 0; v < visible.size(); v += stride) {
        Eigen::Vector3d p = local[v];
        if (params.range_sigma > 0.0) {
            const double range = p.norm();
            p *= (range + rng.gaussian(0.0, params.range_sigma)) / range;
        }
        scan.points.points.push_back(
            {p.x(), p.y(), p.z(), field_cloud.points[visible[v]].intensity});
    }
    return scan;
}

} // namespace daynight::sim
