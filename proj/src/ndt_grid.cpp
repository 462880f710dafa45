#include "daynight/ndt_grid.hpp"

#include <stdexcept>

namespace daynight::field {

namespace {

struct Accum {
    Eigen::Vector3d sum = Eigen::Vector3d::Zero();
    int count = 0;
};

Eigen::Matrix3d condition_covariance(const Eigen::Matrix3d& cov, const NdtParams& params) {
    // Symmetrize before decomposing; accumulation rounding can leave a
    // ~1e-16 skew part.
    const Eigen::Matrix3d sym = 0.5 * (cov + cov.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(sym);
    Eigen::Vector3d evals = es.eigenvalues();
    const double floor_val =
        std::max(params.eigen_floor_abs, params.eigen_floor_rel * evals.maxCoeff());
    for (int i = 0; i < 3; ++i) evals[i] = std::max(evals[i], floor_val);
    return es.eigenvectors() * evals.asDiagonal() * es.eigenvectors().transpose();
}

} // namespace

NdtGrid build_ndt_grid(const PointCloud& cloud, const NdtParams& params) {
    if (params.cell_size <= 0.0) throw std::invalid_argument("build_ndt_grid: cell_size <= 0");
    if (cloud.empty()) throw std::invalid_argument("build_ndt_grid: empty cloud");

    const double cs = params.cell_size;
    auto index_of = [cs](const Point4& p) {
        return CellIndex{static_cast<std::int32_t>(std::floor(p.x / cs)),
                         static_cast<std::int32_t>(std::floor(p.y / cs)),
                         static_cast<std::int32_t>(std::floor(p.z / cs))};
    };

    // Two-pass moments: means first, then scatter about the mean.
    std::unordered_map<CellIndex, Accum, CellIndexHash> acc;
    for (const auto& p : cloud.points) {
        auto& a = acc[index_of(p)];
        a.sum += p.xyz();
        a.count += 1;
    }

    std::unordered_map<CellIndex, NdtCell, CellIndexHash> cells;
    cells.reserve(acc.size());
    for (const auto& [idx, a] : acc) {
        if (a.count < params.min_points_per_cell) continue;
        NdtCell cell;
        cell.mean = a.sum / a.count;
        cell.point_count = a.count;
        cells.emplace(idx, cell);
    }
    if (cells.empty()) throw std::runtime_error("build_ndt_grid: no valid cells");

    std::unordered_map<CellIndex, Eigen::Matrix3d, CellIndexHash> scatter;
    scatter.reserve(cells.size());
    for (const auto& p : cloud.points) {
        const auto it = cells.find(index_of(p));
        if (it == cells.end()) continue;
        const Eigen::Vector3d d = p.xyz() - it->second.mean;
        auto [sit, inserted] = scatter.try_emplace(it->first, Eigen::Matrix3d::Zero());
        sit->second += d * d.transpose();
    }

    for (auto& [idx, cell] : cells) {
        const Eigen::Matrix3d raw = scatter.at(idx) / cell.point_count;
        cell.cov = condition_covariance(raw, params);
        cell.inv_cov = cell.cov.inverse();
    }
    return NdtGrid(params.cell_size, std::move(cells));
}

} // namespace daynight::field
