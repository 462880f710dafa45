#pragma once

#include <Eigen/Dense>

namespace daynight::geom {

/// Wrap an angle into (-pi, pi] (shortest arc; +pi maps to +pi).
double wrap_angle(double a);

/// Vehicle pose as [x, y, z, roll, yaw, pitch]: meters and radians.
/// Angles are always stored wrapped into (-pi, pi].
struct Pose6D {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double roll = 0.0;
    double pitch = 0.0;
    double yaw = 0.0;

    Pose6D() = default;
    Pose6D(double x_, double y_, double z_, double roll_, double pitch_, double yaw_);

    bool finite() const;
};

/// 4x4 rigid transform. The rotation block is kept orthonormal
/// (||R^T R - I||_F < 1e-9, det R = +1) and the bottom row is exactly
/// [0, 0, 0, 1]; construction from a raw matrix validates both.
class Htm {
public:
    Htm() : m_(Eigen::Matrix4d::Identity()) {}

    /// Validates the rigid-transform invariants; throws std::invalid_argument
    /// on violation.
    static Htm from_matrix(const Eigen::Matrix4d& m);

    /// Trusted constructor for matrices built internally from R, t.
    static Htm from_rt(const Eigen::Matrix3d& r, const Eigen::Vector3d& t);

    static Htm identity() { return Htm(); }

    const Eigen::Matrix4d& matrix() const { return m_; }
    Eigen::Matrix3d rotation() const { return m_.block<3, 3>(0, 0); }
    Eigen::Vector3d translation() const { return m_.block<3, 1>(0, 3); }

    Eigen::Vector3d apply(const Eigen::Vector3d& p) const {
        return m_.block<3, 3>(0, 0) * p + m_.block<3, 1>(0, 3);
    }

private:
    explicit Htm(const Eigen::Matrix4d& m) : m_(m) {}
    Eigen::Matrix4d m_;
};

/// Euler convention used everywhere in this project: intrinsic
/// Z(yaw) - Y(pitch) - X(roll), i.e. R = Rz(yaw) * Ry(pitch) * Rx(roll).
Eigen::Matrix3d rotation_from_euler(double roll, double pitch, double yaw);

Htm pose_to_htm(const Pose6D& p);

/// Inverse of pose_to_htm. Gimbal-degenerate case (|pitch| = pi/2) is
/// resolved by fixing roll = 0. Throws if h violates orthonormality
/// beyond tolerance.
Pose6D htm_to_pose(const Htm& h);

Htm compose(const Htm& a, const Htm& b);
Htm invert(const Htm& h);

/// Euclidean norm over (x, y, z).
double position_distance(const Pose6D& a, const Pose6D& b);

/// Geodesic rotation angle between the two orientations, in [0, pi].
double angular_distance(const Pose6D& a, const Pose6D& b);

} // namespace daynight::geom
