#pragma once

#include <vector>

#include "daynight/geometry.hpp"
#include "daynight/ndt_grid.hpp"
#include "daynight/vehicle.hpp"

namespace daynight::loc {

struct RegistrationResult {
    geom::Htm transform;                 // optimal map-from-sensor transform
    double error = 0.0;                  // association error at the optimum
    int iterations = 0;
    bool converged = false;
    double matched_point_fraction = 0.0; // scan points landing in occupied cells
    std::vector<double> error_history;   // E after each accepted iteration
};

struct RegistrationParams {
    int max_iterations = 50;
    double update_tolerance = 1e-6;      // convergence: accepted step norm below this
    double ftol_rel = 1e-4;              // convergence: accepted decrease below this
                                         // fraction of the current error
    double max_step = 0.25;              // m, per-iteration step cap; keeps the
                                         // quadratic model inside its cell assignment
    double outlier_penalty = 9.0;        // per point in an unoccupied cell (3-sigma level)
    bool verbose = false;                // dump per-iteration error to stderr
};

/// Mahalanobis association error of the scan against the Gaussian grid under
/// candidate transform h: sum over points of (hc - mu)^T Sigma^-1 (hc - mu)
/// for occupied cells, plus a fixed penalty per point in an unoccupied cell.
double association_error(const geom::Htm& h, const sim::LidarScan& scan,
                         const field::NdtGrid& grid, double outlier_penalty = 9.0);

/// Gradient of association_error with respect to a body-frame increment:
/// d/dxi E(h * T(xi)) at xi = 0, with xi = [tx, ty, tz, roll, pitch, yaw].
/// Penalty terms are locally constant and contribute nothing.
Eigen::Matrix<double, 6, 1> association_error_gradient(const geom::Htm& h,
                                                       const sim::LidarScan& scan,
                                                       const field::NdtGrid& grid);

/// Minimizes the association error by Gauss-Newton over a 6-parameter
/// body-frame pose increment with backtracking line search. Deterministic
/// given inputs. Throws on an empty grid.
RegistrationResult register_scan(const sim::LidarScan& scan, const field::NdtGrid& grid,
                                 const geom::Htm& initial_guess,
                                 const RegistrationParams& params = {});

/// Registration seeded at the previous frame's pose. Non-convergence is
/// reported through the thrown error so callers can apply their own policy.
struct LocalizationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

geom::Pose6D localize_frame(const sim::LidarScan& scan, const field::NdtGrid& grid,
                            const geom::Pose6D& prev_pose,
                            const RegistrationParams& params = {});

} // namespace daynight::loc
