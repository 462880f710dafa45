#include "daynight/trajectory.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace daynight::track {

void Trajectory::validate() const {
    if (samples.empty()) throw std::invalid_argument("Trajectory: no samples");
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (!(samples[i].t > samples[i - 1].t))
            throw std::invalid_argument("Trajectory: timestamps not strictly increasing");
        if (geom::position_distance(samples[i].pose, samples[i - 1].pose) > 1.0 + 1e-9)
            throw std::invalid_argument("Trajectory: position gap exceeds 1 m");
        if (samples[i].velocity < 0.0)
            throw std::invalid_argument("Trajectory: negative velocity");
    }
}

double Trajectory::arc_length() const {
    double s = 0.0;
    for (std::size_t i = 1; i < samples.size(); ++i)
        s += geom::position_distance(samples[i].pose, samples[i - 1].pose);
    return s;
}

Trajectory trajectory_from_waypoints(const std::vector<Eigen::Vector2d>& waypoints,
                                     double speed_mps, double spacing) {
    if (waypoints.empty()) throw std::invalid_argument("trajectory_from_waypoints: no waypoints");
    if (speed_mps <= 0.0) throw std::invalid_argument("trajectory_from_waypoints: speed <= 0");
    if (spacing <= 0.0 || spacing > 1.0)
        throw std::invalid_argument("trajectory_from_waypoints: spacing must be in (0, 1]");

    Trajectory traj;
    auto push = [&](const Eigen::Vector2d& p, double yaw, double s) {
        TrajectorySample sm;
        sm.t = s / speed_mps;
        sm.pose = geom::Pose6D(p.x(), p.y(), 0.0, 0.0, 0.0, yaw);
        sm.velocity = speed_mps;
        traj.samples.push_back(sm);
    };

    if (waypoints.size() == 1) {
        push(waypoints[0], 0.0, 0.0);
        return traj;
    }

    double s = 0.0;           // arc length at the last emitted sample
    double carried = 0.0;     // distance into the current segment already covered
    Eigen::Vector2d prev = waypoints[0];
    bool first = true;
    for (std::size_t w = 1; w < waypoints.size(); ++w) {
        const Eigen::Vector2d seg = waypoints[w] - prev;
        const double seg_len = seg.norm();
        if (seg_len < 1e-12) continue;
        const Eigen::Vector2d dir = seg / seg_len;
        const double yaw = std::atan2(dir.y(), dir.x());
        if (first) {
            push(prev, yaw, 0.0);
            first = false;
        }
        double along = spacing - carried;
        while (along <= seg_len + 1e-12) {
            s += spacing;
            push(prev + dir * along, yaw, s);
            along += spacing;
        }
        carried = seg_len - (along - spacing);
        prev = waypoints[w];
    }
    if (traj.samples.empty()) {
        // All segments degenerate: collapse to a single-sample trajectory.
        push(waypoints[0], 0.0, 0.0);
        return traj;
    }
    // Close out at the final waypoint unless the last sample already sits there.
    const Eigen::Vector2d last(traj.samples.back().pose.x, traj.samples.back().pose.y);
    const double tail = (prev - last).norm();
    if (tail > 1e-9) {
        const Eigen::Vector2d dir = (prev - last) / tail;
        push(prev, std::atan2(dir.y(), dir.x()), s + tail);
    }
    traj.validate();
    return traj;
}

void save_trajectory(const Trajectory& traj, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_trajectory: cannot open " + path);
    out << "# daynight-trajectory v1\n";
    char line[256];
    for (const auto& s : traj.samples) {
        std::snprintf(line, sizeof(line), "%.9f %.9f %.9f %.9f %.9f %.9f %.9f %.9f\n", s.t,
                      s.pose.x, s.pose.y, s.pose.z, s.pose.roll, s.pose.yaw, s.pose.pitch,
                      s.velocity);
        out << line;
    }
}

Trajectory load_trajectory(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_trajectory: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("# daynight-trajectory v1", 0) != 0)
        throw std::runtime_error("load_trajectory: missing header in " + path);
    Trajectory traj;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        TrajectorySample s;
        double roll, yaw, pitch;
        if (!(ss >> s.t >> s.pose.x >> s.pose.y >> s.pose.z >> roll >> yaw >> pitch >>
              s.velocity))
            throw std::runtime_error("load_trajectory: malformed line: " + line);
        s.pose.roll = roll;
        s.pose.yaw = yaw;
        s.pose.pitch = pitch;
        traj.samples.push_back(s);
    }
    traj.validate();
    return traj;
}

} // namespace daynight::track
