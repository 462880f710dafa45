#include "daynight/localization.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace daynight::loc {

namespace {

/// Body-frame increment as a transform: translation xi[0..2], Euler angles
/// xi[3..5]. Matches the Jacobians below to first order.
geom::Htm increment_transform(const Eigen::Matrix<double, 6, 1>& xi) {
    return geom::pose_to_htm(geom::Pose6D(xi[0], xi[1], xi[2], xi[3], xi[4], xi[5]));
}

Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
    Eigen::Matrix3d s;
    s << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
    return s;
}

struct NormalEquations {
    Eigen::Matrix<double, 6, 6> hessian = Eigen::Matrix<double, 6, 6>::Zero();
    Eigen::Matrix<double, 6, 1> gradient = Eigen::Matrix<double, 6, 1>::Zero();
    double error = 0.0;
    std::size_t matched = 0;
};

NormalEquations accumulate(const geom::Htm& h, const sim::LidarScan& scan,
                           const field::NdtGrid& grid, double outlier_penalty) {
    NormalEquations eq;
    const Eigen::Matrix3d rot = h.rotation();
    for (const auto& pt : scan.points.points) {
        const Eigen::Vector3d local = pt.xyz();
        const Eigen::Vector3d world = h.apply(local);
        const field::NdtCell* cell = grid.cell_at(world);
        if (cell == nullptr) {
            eq.error += outlier_penalty;
            continue;
        }
        eq.matched += 1;
        const Eigen::Vector3d d = world - cell->mean;
        const Eigen::Matrix3d& a = cell->inv_cov;
        eq.error += d.dot(a * d);

        Eigen::Matrix<double, 3, 6> jac;
        jac.block<3, 3>(0, 0) = rot;
        jac.block<3, 3>(0, 3) = -rot * skew(local);
        const Eigen::Matrix<double, 3, 6> aj = a * jac;
        eq.hessian += 2.0 * jac.transpose() * aj;
        eq.gradient += 2.0 * jac.transpose() * (a * d);
    }
    return eq;
}

} // namespace

double association_error(const geom::Htm& h, const sim::LidarScan& scan,
                         const field::NdtGrid& grid, double outlier_penalty) {
    if (grid.empty()) throw std::invalid_argument("association_error: empty grid");
    double error = 0.0;
    for (const auto& pt : scan.points.points) {
        const Eigen::Vector3d world = h.apply(pt.xyz());
        const field::NdtCell* cell = grid.cell_at(world);
        if (cell == nullptr) {
            error += outlier_penalty;
            continue;
        }
        const Eigen::Vector3d d = world - cell->mean;
        error += d.dot(cell->inv_cov * d);
    }
    return error;
}

Eigen::Matrix<double, 6, 1> association_error_gradient(const geom::Htm& h,
                                                       const sim::LidarScan& scan,
                                                       const field::NdtGrid& grid) {
    return accumulate(h, scan, grid, 0.0).gradient;
}

RegistrationResult register_scan(const sim::LidarScan& scan, const field::NdtGrid& grid,
                                 const geom::Htm& initial_guess,
                                 const RegistrationParams& params) {
    if (grid.empty()) throw std::invalid_argument("register_scan: empty grid");

    RegistrationResult result;
    result.transform = initial_guess;
    result.error = association_error(initial_guess, scan, grid, params.outlier_penalty);
    result.error_history.push_back(result.error);

    if (scan.points.empty()) return result; // nothing to match, converged stays false

    for (int iter = 0; iter < params.max_iterations; ++iter) {
        result.iterations = iter + 1;
        const NormalEquations eq =
            accumulate(result.transform, scan, grid, params.outlier_penalty);
        if (params.verbose)
            std::fprintf(stderr, "[register_scan] iter %d  E=%.9g  matched=%zu\n", iter,
                         eq.error, eq.matched);

        if (eq.matched == 0) break; // pure penalty plateau, no usable gradient

        const Eigen::LDLT<Eigen::Matrix<double, 6, 6>> ldlt(eq.hessian);
        if (ldlt.info() != Eigen::Success) break;
        Eigen::Matrix<double, 6, 1> step = ldlt.solve(-eq.gradient);
        if (!step.allFinite()) break;
        if (step.norm() > params.max_step) step *= params.max_step / step.norm();

        // Backtracking line search: accept the first scale that decreases E.
        double alpha = 1.0;
        bool accepted = false;
        double improvement = 0.0;
        while (alpha >= 1.0 / 1024.0) {
            const geom::Htm candidate =
                geom::compose(result.transform, increment_transform(alpha * step));
            const double e = association_error(candidate, scan, grid, params.outlier_penalty);
            if (e <= eq.error) {
                result.transform = candidate;
                improvement = eq.error - e;
                result.error = e;
                result.error_history.push_back(e);
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            // The cost is piecewise smooth in the cell assignments: near a
            // minimum every move trades voxel-boundary flips against a
            // vanishing quadratic gain, so a fully stalled line search is
            // numerical stationarity. Basin failures surface through the
            // matched fraction and the residual error, not this flag.
            result.converged = true;
            break;
        }
        if ((alpha * step).norm() < params.update_tolerance ||
            improvement <= params.ftol_rel * std::max(result.error, 1e-12)) {
            result.converged = true;
            break;
        }
    }

    const NormalEquations final_eq =
        accumulate(result.transform, scan, grid, params.outlier_penalty);
    result.error = final_eq.error;
    result.matched_point_fraction =
        static_cast<double>(final_eq.matched) / static_cast<double>(scan.points.size());
    return result;
}

geom::Pose6D localize_frame(const sim::LidarScan& scan, const field::NdtGrid& grid,
                            const geom::Pose6D& prev_pose, const RegistrationParams& params) {
    if (!prev_pose.finite()) throw std::invalid_argument("localize_frame: invalid prev_pose");
    const RegistrationResult result =
        register_scan(scan, grid, geom::pose_to_htm(prev_pose), params);
    if (!result.converged)
        throw LocalizationFailure("localize_frame: registration did not converge (error " +
                                  std::to_string(result.error) + ", matched fraction " +
                                  std::to_string(result.matched_point_fraction) + ")");
    return geom::htm_to_pose(result.transform);
}

} // namespace daynight::loc
