#pragma once

#include <string>
#include <vector>

#include "daynight/geometry.hpp"

namespace daynight::track {

struct TrajectorySample {
    double t = 0.0;          // s
    geom::Pose6D pose;
    double velocity = 0.0;   // m/s
};

/// Timestamped sequence of (pose, velocity) samples. Timestamps are strictly
/// increasing and consecutive position gaps stay at or below 1 m
/// (densification is enforced at authoring time).
struct Trajectory {
    std::vector<TrajectorySample> samples;

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }

    /// Throws std::invalid_argument when the invariants are violated.
    void validate() const;

    /// Total arc length over sample positions.
    double arc_length() const;
};

/// Authors a desired trajectory from a 2D waypoint polyline and a constant
/// target speed: arc-length resampling at `spacing`, yaw along the local
/// segment direction, timestamps from distance / speed.
Trajectory trajectory_from_waypoints(const std::vector<Eigen::Vector2d>& waypoints,
                                     double speed_mps, double spacing = 0.25);

/// Line-delimited trajectory file: "# daynight-trajectory v1" header then
/// one "t x y z roll yaw pitch v" record per line.
void save_trajectory(const Trajectory& traj, const std::string& path);
Trajectory load_trajectory(const std::string& path);

} // namespace daynight::track
