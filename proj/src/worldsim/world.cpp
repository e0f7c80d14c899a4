// Copyright 2026 splatnav contributors
// Licensed under the Apache License, Version 2.0.

#include "splatnav/worldsim/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "splatnav/core/errors.hpp"

namespace splatnav {
namespace {

constexpr double kRayEps = 1e-9;

struct RayHit {
    double t = std::numeric_limits<double>::infinity();
    int obstacle = -1;  // -1 means ground
    bool valid() const { return std::isfinite(t); }
};

// Nearest intersection with a vertical cylinder (side surface and top cap).
double ray_cylinder(const Eigen::Vector3d& o, const Eigen::Vector3d& d,
                    const CylinderShape& c) {
    double best = std::numeric_limits<double>::infinity();

    const double ox = o.x() - c.center.x(), oy = o.y() - c.center.y();
    const double a = d.x() * d.x() + d.y() * d.y();
    if (a > 1e-16) {
        const double b = 2.0 * (ox * d.x() + oy * d.y());
        const double q = ox * ox + oy * oy - c.radius * c.radius;
        const double disc = b * b - 4.0 * a * q;
        if (disc >= 0.0) {
            const double sq = std::sqrt(disc);
            for (double t : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)}) {
                if (t <= kRayEps || t >= best) continue;
                const double z = o.z() + t * d.z();
                if (z >= 0.0 && z <= c.height) best = t;
            }
        }
    }
    if (std::fabs(d.z()) > 1e-16) {
        const double t = (c.height - o.z()) / d.z();
        if (t > kRayEps && t < best) {
            const double hx = o.x() + t * d.x() - c.center.x();
            const double hy = o.y() + t * d.y() - c.center.y();
            if (hx * hx + hy * hy <= c.radius * c.radius) best = t;
        }
    }
    return best;
}

// Slab test against an oriented box footprint extruded to [0, height].
double ray_box(const Eigen::Vector3d& o, const Eigen::Vector3d& d, const BoxShape& b) {
    const double cs = std::cos(b.yaw), sn = std::sin(b.yaw);
    const double ox = o.x() - b.center.x(), oy = o.y() - b.center.y();
    // into box-local coordinates
    const Eigen::Vector3d ol(cs * ox + sn * oy, -sn * ox + cs * oy, o.z());
    const Eigen::Vector3d dl(cs * d.x() + sn * d.y(), -sn * d.x() + cs * d.y(), d.z());

    const double lo[3] = {-b.half_extents.x(), -b.half_extents.y(), 0.0};
    const double hi[3] = {b.half_extents.x(), b.half_extents.y(), b.height};
    double tmin = 0.0, tmax = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k) {
        if (std::fabs(dl[k]) < 1e-16) {
            if (ol[k] < lo[k] || ol[k] > hi[k]) return std::numeric_limits<double>::infinity();
            continue;
        }
        double t0 = (lo[k] - ol[k]) / dl[k];
        double t1 = (hi[k] - ol[k]) / dl[k];
        if (t0 > t1) std::swap(t0, t1);
        tmin = std::max(tmin, t0);
        tmax = std::min(tmax, t1);
        if (tmin > tmax) return std::numeric_limits<double>::infinity();
    }
    if (tmax <= kRayEps) return std::numeric_limits<double>::infinity();
    return tmin > kRayEps ? tmin : tmax;  // inside the box: exit surface
}

RayHit raycast(const Scene& scene, const Eigen::Vector3d& origin, const Eigen::Vector3d& dir,
               double max_range) {
    RayHit hit;
    if (dir.z() < -1e-16 && origin.z() > 0.0) {
        const double t = -origin.z() / dir.z();
        if (t > kRayEps && t <= max_range) {
            hit.t = t;
            hit.obstacle = -1;
        }
    }
    for (std::size_t i = 0; i < scene.obstacles.size(); ++i) {
        const auto& ob = scene.obstacles[i];
        const double t = std::holds_alternative<CylinderShape>(ob.shape)
                             ? ray_cylinder(origin, dir, std::get<CylinderShape>(ob.shape))
                             : ray_box(origin, dir, std::get<BoxShape>(ob.shape));
        if (t <= max_range && t < hit.t) {
            hit.t = t;
            hit.obstacle = static_cast<int>(i);
        }
    }
    return hit;
}

bool point_in_convex_polygon(const std::vector<Eigen::Vector2d>& poly,
                             const Eigen::Vector2d& p) {
    if (poly.size() < 3) return false;
    int sign = 0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Eigen::Vector2d& a = poly[i];
        const Eigen::Vector2d& b = poly[(i + 1) % poly.size()];
        const double cr = (b.x() - a.x()) * (p.y() - a.y()) - (b.y() - a.y()) * (p.x() - a.x());
        if (cr > 1e-12) {
            if (sign < 0) return false;
            sign = 1;
        } else if (cr < -1e-12) {
            if (sign > 0) return false;
            sign = -1;
        }
    }
    return true;
}

TerrainClass ground_class_at(const Scene& scene, const Eigen::Vector2d& p) {
    for (const auto& patch : scene.patches) {
        if (point_in_convex_polygon(patch.polygon, p)) return patch.cls;
    }
    return scene.default_ground;
}

double wrap_angle(double a) {
    a = std::fmod(a + M_PI, 2.0 * M_PI);
    if (a <= 0.0) a += 2.0 * M_PI;
    return a - M_PI;
}

}  // namespace

void Scene::validate() const {
    if (!(bounds_min.x() < bounds_max.x() && bounds_min.y() < bounds_max.y())) {
        throw ConfigError("scene: degenerate bounds");
    }
    auto inside = [&](const Eigen::Vector2d& p) {
        return p.x() >= bounds_min.x() && p.x() <= bounds_max.x() && p.y() >= bounds_min.y() &&
               p.y() <= bounds_max.y();
    };
    if (!inside(start) || !inside(goal)) throw ConfigError("scene: start/goal outside bounds");
    for (const auto& ob : obstacles) {
        if (ob.pliable && ob.cls != TerrainClass::VegetationHighResistance) {
            throw ConfigError("scene: only VegetationHighResistance may be pliable");
        }
        if (ob.cls == TerrainClass::RigidObstacle && ob.pliable) {
            throw ConfigError("scene: rigid obstacles cannot be pliable");
        }
        const Eigen::Vector2d c = std::holds_alternative<CylinderShape>(ob.shape)
                                      ? std::get<CylinderShape>(ob.shape).center
                                      : std::get<BoxShape>(ob.shape).center;
        if (!inside(c)) throw ConfigError("scene: obstacle footprint outside bounds");
    }
    for (const auto& patch : patches) {
        if (patch.polygon.size() < 3) throw ConfigError("scene: patch with <3 vertices");
        if (patch.cls == TerrainClass::RigidObstacle) {
            throw ConfigError("scene: ground patch cannot be RigidObstacle");
        }
    }
}

Pose3 camera_pose_world(const RobotState& s, const CameraMount& mount) {
    const double th = s.heading;
    const double p = mount.pitch_deg * M_PI / 180.0;
    const double cp = std::cos(p), sp = std::sin(p);
    // camera axes in world: x right, y down, z optical
    Eigen::Matrix3d rot;
    rot.col(0) = Eigen::Vector3d(std::sin(th), -std::cos(th), 0.0);
    rot.col(2) = Eigen::Vector3d(std::cos(th) * cp, std::sin(th) * cp, sp);
    rot.col(1) = rot.col(2).cross(rot.col(0));
    const Eigen::Quaterniond q(rot);
    return Pose3::from_wxyz(q.w(), q.x(), q.y(), q.z(), {s.x, s.y, mount.height});
}

Pose3 lidar_pose_world(const RobotState& s, double height) {
    return Pose3::from_axis_angle(Eigen::Vector3d::UnitZ(), s.heading, {s.x, s.y, height});
}

LidarScan lidar_scan(const Scene& scene, const Pose3& sensor_pose, const LidarConfig& cfg,
                     std::uint64_t seed) {
    if (cfg.channels < 1 || cfg.azimuth_steps < 4) throw ConfigError("lidar: bad config");

    LidarScan scan;
    scan.points_sensor.reserve(static_cast<std::size_t>(cfg.channels) * cfg.azimuth_steps);
    scan.ranges.reserve(scan.points_sensor.capacity());

    const Eigen::Matrix3d rot = sensor_pose.rotation_matrix();
    const Eigen::Vector3d origin = sensor_pose.trans;
    const double vfov = cfg.vertical_fov_deg * M_PI / 180.0;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    for (int ch = 0; ch < cfg.channels; ++ch) {
        const double elev = cfg.channels == 1
                                ? 0.0
                                : -vfov + 2.0 * vfov * ch / (cfg.channels - 1);
        const double ce = std::cos(elev), se = std::sin(elev);
        for (int az = 0; az < cfg.azimuth_steps; ++az) {
            const double th = cfg.delta_theta() * az;
            const Eigen::Vector3d dir_sensor(ce * std::cos(th), ce * std::sin(th), se);
            const Eigen::Vector3d dir_world = rot * dir_sensor;
            const RayHit hit = raycast(scene, origin, dir_world, cfg.max_range);
            if (!hit.valid()) continue;
            double range = hit.t;
            if (cfg.sigma_r > 0.0) {
                const double u1 = 1.0 - uni(rng), u2 = uni(rng);
                range += cfg.sigma_r * std::sqrt(-2.0 * std::log(u1)) *
                         std::cos(2.0 * M_PI * u2);
                range = std::max(range, 1e-3);
            }
            scan.points_sensor.push_back(dir_sensor * range);
            scan.ranges.push_back(range);
        }
    }
    return scan;
}

ClassImage semantic_camera(const Scene& scene, const Pose3& cam_pose, const CameraModel& cam) {
    if (!cam.valid()) throw ConfigError("semantic_camera: invalid camera");
    ClassImage img;
    img.width = cam.width;
    img.height = cam.height;
    img.ids.assign(static_cast<std::size_t>(cam.width) * cam.height, TerrainClass::Unknown);

    const Eigen::Matrix3d rot = cam_pose.rotation_matrix();
    const Eigen::Vector3d origin = cam_pose.trans;
    constexpr double kFar = 500.0;

    for (int v = 0; v < cam.height; ++v) {
        for (int u = 0; u < cam.width; ++u) {
            const Eigen::Vector3d dir_cam((u - cam.cx) / cam.fx, (v - cam.cy) / cam.fy, 1.0);
            const Eigen::Vector3d dir = (rot * dir_cam).normalized();
            const RayHit hit = raycast(scene, origin, dir, kFar);
            if (!hit.valid()) continue;
            TerrainClass cls;
            if (hit.obstacle >= 0) {
                cls = scene.obstacles[static_cast<std::size_t>(hit.obstacle)].cls;
            } else {
                const Eigen::Vector3d p = origin + hit.t * dir;
                cls = ground_class_at(scene, p.head<2>());
            }
            img.ids[static_cast<std::size_t>(v) * cam.width + u] = cls;
        }
    }
    return img;
}

RobotState step_robot(const RobotState& s, double v_cmd, double omega_cmd, double dt,
                      const RobotLimits& limits) {
    if (dt <= 0.0) throw ConfigError("step_robot: dt must be positive");
    RobotState out = s;
    out.v = std::clamp(v_cmd, -limits.v_max, limits.v_max);
    out.omega = std::clamp(omega_cmd, -limits.omega_max, limits.omega_max);
    out.x = s.x + out.v * std::cos(s.heading) * dt;
    out.y = s.y + out.v * std::sin(s.heading) * dt;
    out.heading = wrap_angle(s.heading + out.omega * dt);
    out.t = s.t + dt;
    return out;
}

Contact check_collision(const Scene& scene, const RobotState& s) {
    const Eigen::Vector2d p(s.x, s.y);
    bool pliable_contact = false;
    for (const auto& ob : scene.obstacles) {
        bool overlap = false;
        if (std::holds_alternative<CylinderShape>(ob.shape)) {
            const auto& c = std::get<CylinderShape>(ob.shape);
            overlap = (p - c.center).norm() < s.radius + c.radius;
        } else {
            const auto& b = std::get<BoxShape>(ob.shape);
            const double cs = std::cos(b.yaw), sn = std::sin(b.yaw);
            const Eigen::Vector2d d = p - b.center;
            const Eigen::Vector2d local(cs * d.x() + sn * d.y(), -sn * d.x() + cs * d.y());
            const Eigen::Vector2d clamped(
                std::clamp(local.x(), -b.half_extents.x(), b.half_extents.x()),
                std::clamp(local.y(), -b.half_extents.y(), b.half_extents.y()));
            overlap = (local - clamped).norm() < s.radius;
        }
        if (!overlap) continue;
        if (!ob.pliable) return Contact::RigidCollision;
        pliable_contact = true;
    }
    return pliable_contact ? Contact::PliableContact : Contact::Free;
}

}  // namespace splatnav
