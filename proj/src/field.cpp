#include "daynight/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "daynight/rng.hpp"

namespace daynight::field {

Bounds2D layout_bounds(const FieldLayout& layout) {
    if (layout.empty()) throw std::invalid_argument("layout_bounds: empty layout");
    Bounds2D b;
    b.min_x = b.min_y = std::numeric_limits<double>::infinity();
    b.max_x = b.max_y = -std::numeric_limits<double>::infinity();
    auto grow = [&b](double x, double y) {
        b.min_x = std::min(b.min_x, x);
        b.min_y = std::min(b.min_y, y);
        b.max_x = std::max(b.max_x, x);
        b.max_y = std::max(b.max_y, y);
    };
    for (const auto& r : layout.roads) {
        const double hw = r.width / 2.0;
        grow(r.x0 - hw, r.y0 - hw);
        grow(r.x0 + hw, r.y0 + hw);
        grow(r.x1 - hw, r.y1 - hw);
        grow(r.x1 + hw, r.y1 + hw);
    }
    for (const auto& p : layout.poles) {
        grow(p.x - p.radius, p.y - p.radius);
        grow(p.x + p.radius, p.y + p.radius);
    }
    for (const auto& v : layout.vehicles) {
        const double r = std::hypot(v.length, v.width) / 2.0;
        grow(v.pose.x - r, v.pose.y - r);
        grow(v.pose.x + r, v.pose.y + r);
    }
    return b;
}

namespace {

void sample_ground(const Bounds2D& b, const FieldSamplingParams& params, Rng& rng,
                   PointCloud& out) {
    // Jittered grid: one point per cell of side 1/sqrt(density), jittered
    // within the cell. Guarantees the density floor everywhere.
    const double step = 1.0 / std::sqrt(params.ground_density);
    const double x0 = b.min_x - params.ground_margin;
    const double y0 = b.min_y - params.ground_margin;
    const double x1 = b.max_x + params.ground_margin;
    const double y1 = b.max_y + params.ground_margin;
    const int nx = static_cast<int>(std::ceil((x1 - x0) / step));
    const int ny = static_cast<int>(std::ceil((y1 - y0) / step));
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            Point4 p;
            p.x = x0 + (i + rng.uniform01()) * step;
            p.y = y0 + (j + rng.uniform01()) * step;
            p.z = rng.gaussian(0.0, params.ground_z_sigma);
            p.intensity = 0.15 + 0.05 * rng.uniform01();
            out.points.push_back(p);
        }
    }
}

void sample_curbs(const RoadSegment& r, const FieldSamplingParams& params, Rng& rng,
                  PointCloud& out) {
    const double len = std::hypot(r.x1 - r.x0, r.y1 - r.y0);
    if (len < 1e-9) return;
    const double ux = (r.x1 - r.x0) / len;
    const double uy = (r.y1 - r.y0) / len;
    const double nx = -uy, ny = ux;
    const double hw = r.width / 2.0;
    const int n = static_cast<int>(std::floor(len / params.curb_spacing));
    for (int side = -1; side <= 1; side += 2) {
        for (int i = 0; i <= n; ++i) {
            const double s = i * params.curb_spacing;
            // Two rows per edge: base and top of the curb face.
            for (const double zfrac : {0.5, 1.0}) {
                Point4 p;
                p.x = r.x0 + ux * s + side * nx * hw;
                p.y = r.y0 + uy * s + side * ny * hw;
                p.z = params.curb_height * zfrac + 0.002 * rng.gaussian();
                p.intensity = 0.4;
                out.points.push_back(p);
            }
        }
    }
}

void sample_pole(const Pole& pole, const FieldSamplingParams& params, PointCloud& out) {
    const int n_z = std::max(2, static_cast<int>(std::floor(pole.height / params.pole_spacing)));
    const int n_a = std::max(6, static_cast<int>(std::floor(2.0 * M_PI * pole.radius /
                                                            params.pole_spacing)));
    for (int iz = 0; iz <= n_z; ++iz) {
        const double z = pole.height * iz / n_z;
        for (int ia = 0; ia < n_a; ++ia) {
            const double a = 2.0 * M_PI * ia / n_a;
            Point4 p;
            p.x = pole.x + pole.radius * std::cos(a);
            p.y = pole.y + pole.radius * std::sin(a);
            p.z = z;
            p.intensity = 0.7;
            out.points.push_back(p);
        }
    }
}

void sample_box(const VehicleBox& box, const FieldSamplingParams& params, Rng& rng,
                PointCloud& out) {
    const geom::Htm tf = geom::pose_to_htm(box.pose);
    const double hl = box.length / 2.0, hw = box.width / 2.0, hh = box.height / 2.0;
    // Six faces: +-x, +-y, +-z in the box frame.
    struct Face {
        int axis;       // fixed axis
        double sign;
        double da, db;  // extents of the two free axes
    };
    const Face faces[6] = {
        {0, +1.0, hw, hh}, {0, -1.0, hw, hh},
        {1, +1.0, hl, hh}, {1, -1.0, hl, hh},
        {2, +1.0, hl, hw}, {2, -1.0, hl, hw},
    };
    for (const auto& f : faces) {
        const double area = 4.0 * f.da * f.db;
        const int n = std::max(4, static_cast<int>(std::round(area * params.box_density)));
        for (int i = 0; i < n; ++i) {
            const double a = rng.uniform(-f.da, f.da);
            const double b = rng.uniform(-f.db, f.db);
            Eigen::Vector3d local;
            if (f.axis == 0) local = {f.sign * hl, a, b};
            else if (f.axis == 1) local = {a, f.sign * hw, b};
            else local = {a, b, f.sign * hh};
            const Eigen::Vector3d w = tf.apply(local);
            out.points.push_back({w.x(), w.y(), w.z(), 0.55});
        }
    }
}

} // namespace

PointCloud synthesize_field(const FieldLayout& layout, const FieldSamplingParams& params) {
    if (layout.empty()) throw std::invalid_argument("synthesize_field: empty layout");

    Rng rng = Rng::stream(params.seed, "field");
    PointCloud cloud;
    const Bounds2D b = layout_bounds(layout);

    sample_ground(b, params, rng, cloud);
    for (const auto& r : layout.roads) sample_curbs(r, params, rng, cloud);
    for (const auto& p : layout.poles) sample_pole(p, params, cloud);
    for (const auto& v : layout.vehicles) sample_box(v, params, rng, cloud);

    return cloud;
}

} // namespace daynight::field
