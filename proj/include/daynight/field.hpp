#pragma once

#include <cstdint>
#include <vector>

#include "daynight/geometry.hpp"
#include "daynight/pointcloud.hpp"

namespace daynight::field {

/// Straight road piece given by its centerline endpoints and width.
/// Slightly raised curb rows are emitted along both edges.
struct RoadSegment {
    double x0 = 0.0, y0 = 0.0;
    double x1 = 0.0, y1 = 0.0;
    double width = 7.0;
};

/// Vertical cylinder (streetlight / sign post).
struct Pole {
    double x = 0.0, y = 0.0;
    double radius = 0.15;
    double height = 5.0;
};

/// Static background vehicle modeled as a box; points are sampled on its
/// six faces.
struct VehicleBox {
    geom::Pose6D pose;               // box center pose (z = half height sits on ground)
    double length = 4.5, width = 1.9, height = 1.5;
};

struct FieldLayout {
    std::vector<RoadSegment> roads;
    std::vector<Pole> poles;
    std::vector<VehicleBox> vehicles;

    bool empty() const { return roads.empty() && poles.empty() && vehicles.empty(); }
};

struct FieldSamplingParams {
    double ground_density = 60.0;    // points per m^2, >= the 50/m^2 floor
    double ground_margin = 3.0;      // ground extends this far beyond the layout bbox
    double ground_z_sigma = 0.015;   // m, surface roughness of the pavement
    double curb_height = 0.25;
    double curb_spacing = 0.30;      // along-edge spacing of curb points
    double pole_spacing = 0.06;      // vertical/angular sampling step on poles
    double box_density = 120.0;      // points per m^2 on box faces
    std::uint64_t seed = 0;
};

/// Synthesizes the closed test field as a point cloud: jittered-grid ground
/// plane, curb rows along road edges, pole cylinders, and box faces.
/// Deterministic for a given (layout, params.seed). Throws on empty layout.
PointCloud synthesize_field(const FieldLayout& layout, const FieldSamplingParams& params);

/// Axis-aligned bounding rectangle of the layout footprint (no margin).
struct Bounds2D {
    double min_x = 0.0, min_y = 0.0, max_x = 0.0, max_y = 0.0;
};
Bounds2D layout_bounds(const FieldLayout& layout);

} // namespace daynight::field
