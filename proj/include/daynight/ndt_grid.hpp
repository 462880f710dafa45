#pragma once

#include <cstdint>
#include <unordered_map>

#include <Eigen/Dense>

#include "daynight/pointcloud.hpp"

namespace daynight::field {

/// Per-voxel Gaussian of the map cloud. The covariance is conditioned so
/// that its inverse is safe to use in Mahalanobis scoring.
struct NdtCell {
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    Eigen::Matrix3d cov = Eigen::Matrix3d::Identity();
    Eigen::Matrix3d inv_cov = Eigen::Matrix3d::Identity();
    int point_count = 0;
};

struct CellIndex {
    std::int32_t i = 0, j = 0, k = 0;
    bool operator==(const CellIndex&) const = default;
};

struct CellIndexHash {
    std::size_t operator()(const CellIndex& c) const {
        // Pack into 63 bits, then mix.
        std::uint64_t v = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.i)) << 42) ^
                          (static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.j)) << 21) ^
                          static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.k));
        v ^= v >> 33;
        v *= 0xff51afd7ed558ccdull;
        v ^= v >> 33;
        return static_cast<std::size_t>(v);
    }
};

/// Voxelized Gaussian map: integer floor-division cell index -> NdtCell.
class NdtGrid {
public:
    NdtGrid() = default;
    NdtGrid(double cell_size, std::unordered_map<CellIndex, NdtCell, CellIndexHash> cells)
        : cell_size_(cell_size), cells_(std::move(cells)) {}

    double cell_size() const { return cell_size_; }
    std::size_t cell_count() const { return cells_.size(); }
    bool empty() const { return cells_.empty(); }

    CellIndex index_of(const Eigen::Vector3d& p) const {
        return {static_cast<std::int32_t>(std::floor(p.x() / cell_size_)),
                static_cast<std::int32_t>(std::floor(p.y() / cell_size_)),
                static_cast<std::int32_t>(std::floor(p.z() / cell_size_))};
    }

    /// nullptr when the point falls in an unoccupied cell.
    const NdtCell* cell_at(const Eigen::Vector3d& p) const {
        const auto it = cells_.find(index_of(p));
        return it == cells_.end() ? nullptr : &it->second;
    }

    const std::unordered_map<CellIndex, NdtCell, CellIndexHash>& cells() const { return cells_; }

private:
    double cell_size_ = 1.0;
    std::unordered_map<CellIndex, NdtCell, CellIndexHash> cells_;
};

struct NdtParams {
    double cell_size = 1.0;
    int min_points_per_cell = 5;     // covariance of fewer samples is unreliable
    double eigen_floor_abs = 1e-4;   // m^2
    double eigen_floor_rel = 0.01;   // fraction of the largest eigenvalue
};

/// Builds the Gaussian grid: per-cell sample mean and covariance with an
/// eigenvalue floor of max(eigen_floor_abs, eigen_floor_rel * lambda_max).
/// Cells with fewer than min_points_per_cell are dropped. Throws
/// "no valid cells" when nothing survives.
NdtGrid build_ndt_grid(const PointCloud& cloud, const NdtParams& params);

inline NdtGrid build_ndt_grid(const PointCloud& cloud, double cell_size) {
    NdtParams p;
    p.cell_size = cell_size;
    return build_ndt_grid(cloud, p);
}

} // namespace daynight::field
