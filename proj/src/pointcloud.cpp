#include "daynight/pointcloud.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace daynight::field {

void save_xyzi(const PointCloud& cloud, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_xyzi: cannot open " + path);
    char line[128];
    for (const auto& p : cloud.points) {
        std::snprintf(line, sizeof(line), "%.6f %.6f %.6f %.6f\n", p.x, p.y, p.z, p.intensity);
        out << line;
    }
}

PointCloud load_xyzi(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_xyzi: cannot open " + path);
    PointCloud cloud;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        Point4 p;
        if (!(ss >> p.x >> p.y >> p.z >> p.intensity))
            throw std::runtime_error("load_xyzi: malformed line: " + line);
        cloud.points.push_back(p);
    }
    if (cloud.empty()) throw std::runtime_error("load_xyzi: no points in " + path);
    return cloud;
}

} // namespace daynight::field
