// Copyright 2026 splatnav contributors
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <optional>

namespace splatnav {

/// Rigid transform in SE(3): apply(p) = R * p + t.
///
/// Quaternion convention is scalar-first (w, x, y, z). All rotation math in
/// the project flows through from_wxyz(), which normalizes, so mixed
/// conventions cannot creep in. Compositions renormalize.
struct Pose3 {
    Eigen::Quaterniond rot{1.0, 0.0, 0.0, 0.0};  // Eigen ctor order is (w,x,y,z)
    Eigen::Vector3d trans{0.0, 0.0, 0.0};

    static Pose3 identity() { return Pose3{}; }

    /// The one constructor for rotations: scalar-first components.
    static Pose3 from_wxyz(double w, double x, double y, double z,
                           const Eigen::Vector3d& t = Eigen::Vector3d::Zero()) {
        Pose3 p;
        p.rot = Eigen::Quaterniond(w, x, y, z).normalized();
        p.trans = t;
        return p;
    }

    static Pose3 from_axis_angle(const Eigen::Vector3d& axis, double angle,
                                 const Eigen::Vector3d& t = Eigen::Vector3d::Zero()) {
        const Eigen::Quaterniond q(Eigen::AngleAxisd(angle, axis.normalized()));
        return from_wxyz(q.w(), q.x(), q.y(), q.z(), t);
    }

    static Pose3 translation(const Eigen::Vector3d& t) {
        Pose3 p;
        p.trans = t;
        return p;
    }

    Eigen::Vector3d apply(const Eigen::Vector3d& p) const { return rot * p + trans; }

    Eigen::Matrix3d rotation_matrix() const { return rot.toRotationMatrix(); }

    /// this ∘ other: (this * other).apply(p) == this.apply(other.apply(p)).
    Pose3 compose(const Pose3& other) const {
        Pose3 out;
        out.rot = (rot * other.rot).normalized();
        out.trans = rot * other.trans + trans;
        return out;
    }

    Pose3 inverse() const {
        Pose3 out;
        out.rot = rot.conjugate();
        out.trans = -(out.rot * trans);
        return out;
    }

    /// Heading of the local +x axis projected on the world xy plane.
    double yaw() const {
        const Eigen::Vector3d fwd = rot * Eigen::Vector3d::UnitX();
        return std::atan2(fwd.y(), fwd.x());
    }
};

inline Eigen::Vector3d se3_apply(const Pose3& pose, const Eigen::Vector3d& p) {
    return pose.apply(p);
}

/// Pinhole intrinsics. Pixel coordinates are continuous with pixel centers at
/// integer positions; (cx, cy) is where the optical axis lands.
struct CameraModel {
    double fx = 0.0;
    double fy = 0.0;
    double cx = 0.0;
    double cy = 0.0;
    int width = 0;
    int height = 0;
    double z_near = 0.01;

    bool valid() const {
        return fx > 0.0 && fy > 0.0 && width >= 1 && height >= 1 && z_near > 0.0;
    }

    double half_fov_x() const { return std::atan2(0.5 * width, fx); }
    double half_fov_y() const { return std::atan2(0.5 * height, fy); }
};

/// Perspective projection of a camera-frame point. Returns nullopt when the
/// point is behind the near plane (BehindCamera); no clipping to the image
/// rectangle, callers cull.
inline std::optional<Eigen::Vector2d> pinhole_project(const CameraModel& cam,
                                                      const Eigen::Vector3d& p_cam) {
    if (p_cam.z() < cam.z_near) return std::nullopt;
    return Eigen::Vector2d(cam.fx * p_cam.x() / p_cam.z() + cam.cx,
                           cam.fy * p_cam.y() / p_cam.z() + cam.cy);
}

}  // namespace splatnav
