#include "daynight/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace daynight::geom {

double wrap_angle(double a) {
    constexpr double kTwoPi = 2.0 * M_PI;
    double w = std::fmod(a + M_PI, kTwoPi);
    if (w <= 0.0) w += kTwoPi;
    return w - M_PI;
}

Pose6D::Pose6D(double x_, double y_, double z_, double roll_, double pitch_, double yaw_)
    : x(x_), y(y_), z(z_), roll(wrap_angle(roll_)), pitch(wrap_angle(pitch_)), yaw(wrap_angle(yaw_)) {}

bool Pose6D::finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z) &&
           std::isfinite(roll) && std::isfinite(pitch) && std::isfinite(yaw);
}

Htm Htm::from_matrix(const Eigen::Matrix4d& m) {
    const Eigen::Matrix3d r = m.block<3, 3>(0, 0);
    const double ortho = (r.transpose() * r - Eigen::Matrix3d::Identity()).norm();
    if (ortho > 1e-9)
        throw std::invalid_argument("Htm: rotation block not orthonormal (residual " +
                                    std::to_string(ortho) + ")");
    if (std::abs(r.determinant() - 1.0) > 1e-9)
        throw std::invalid_argument("Htm: rotation determinant != +1");
    if (m(3, 0) != 0.0 || m(3, 1) != 0.0 || m(3, 2) != 0.0 || m(3, 3) != 1.0)
        throw std::invalid_argument("Htm: bottom row must be [0, 0, 0, 1]");
    return Htm(m);
}

Htm Htm::from_rt(const Eigen::Matrix3d& r, const Eigen::Vector3d& t) {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m.block<3, 3>(0, 0) = r;
    m.block<3, 1>(0, 3) = t;
    return Htm(m);
}

Eigen::Matrix3d rotation_from_euler(double roll, double pitch, double yaw) {
    const Eigen::AngleAxisd rz(yaw, Eigen::Vector3d::UnitZ());
    const Eigen::AngleAxisd ry(pitch, Eigen::Vector3d::UnitY());
    const Eigen::AngleAxisd rx(roll, Eigen::Vector3d::UnitX());
    return (rz * ry * rx).toRotationMatrix();
}

Htm pose_to_htm(const Pose6D& p) {
    return Htm::from_rt(rotation_from_euler(p.roll, p.pitch, p.yaw),
                        Eigen::Vector3d(p.x, p.y, p.z));
}

Pose6D htm_to_pose(const Htm& h) {
    // Re-validate: callers may hold matrices accumulated through many
    // compositions.
    const Htm checked = Htm::from_matrix(h.matrix());
    const Eigen::Matrix3d r = checked.rotation();
    const Eigen::Vector3d t = checked.translation();

    Pose6D p;
    p.x = t.x();
    p.y = t.y();
    p.z = t.z();

    // R = Rz(yaw) Ry(pitch) Rx(roll)  =>  R(2,0) = -sin(pitch).
    const double sp = -r(2, 0);
    if (std::abs(sp) >= 1.0 - 1e-12) {
        // Gimbal lock: only yaw - roll (or yaw + roll) is observable. Fix roll = 0.
        p.pitch = sp > 0.0 ? M_PI / 2.0 : -M_PI / 2.0;
        p.roll = 0.0;
        if (sp > 0.0)
            p.yaw = wrap_angle(-std::atan2(r(0, 1), r(1, 1)));
        else
            p.yaw = wrap_angle(std::atan2(-r(0, 1), r(1, 1)));
    } else {
        p.pitch = std::asin(sp);
        p.roll = std::atan2(r(2, 1), r(2, 2));
        p.yaw = std::atan2(r(1, 0), r(0, 0));
    }
    p.roll = wrap_angle(p.roll);
    p.pitch = wrap_angle(p.pitch);
    p.yaw = wrap_angle(p.yaw);
    return p;
}

Htm compose(const Htm& a, const Htm& b) {
    return Htm::from_rt(a.rotation() * b.rotation(),
                        a.rotation() * b.translation() + a.translation());
}

Htm invert(const Htm& h) {
    const Eigen::Matrix3d rt = h.rotation().transpose();
    return Htm::from_rt(rt, -(rt * h.translation()));
}

double position_distance(const Pose6D& a, const Pose6D& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double angular_distance(const Pose6D& a, const Pose6D& b) {
    const Eigen::Matrix3d ra = rotation_from_euler(a.roll, a.pitch, a.yaw);
    const Eigen::Matrix3d rb = rotation_from_euler(b.roll, b.pitch, b.yaw);
    const double c = ((ra.transpose() * rb).trace() - 1.0) / 2.0;
    return std::acos(std::min(1.0, std::max(-1.0, c)));
}

} // namespace daynight::geom
