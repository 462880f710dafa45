#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace daynight::field {

/// One LiDAR return: position in meters plus reflectance in [0, 1].
struct Point4 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double intensity = 0.0;

    Eigen::Vector3d xyz() const { return {x, y, z}; }
};

struct PointCloud {
    std::vector<Point4> points;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
};

/// ASCII XYZI export: one point per line, space-separated, 6 decimal places.
void save_xyzi(const PointCloud& cloud, const std::string& path);
PointCloud load_xyzi(const std::string& path);

} // namespace daynight::field
