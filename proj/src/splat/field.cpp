// Copyright 2026 splatnav contributors
// Licensed under the Apache License, Version 2.0.

#include "splatnav/splat/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>

#include "splatnav/core/errors.hpp"
#include "splatnav/core/kernels.hpp"

namespace splatnav {

Eigen::Matrix3d covariance_of(const GaussianPrimitive& g) {
    const Eigen::Matrix3d r = g.rot.toRotationMatrix();
    const Eigen::Matrix3d m = r * g.scale.cwiseProduct(g.scale).asDiagonal() * r.transpose();
    return 0.5 * (m + m.transpose());  // kill last-ulp asymmetry
}

Eigen::Matrix3d precision_of(const GaussianPrimitive& g) {
    const Eigen::Matrix3d r = g.rot.toRotationMatrix();
    const Eigen::Vector3d inv_s2 = g.scale.cwiseProduct(g.scale).cwiseInverse();
    const Eigen::Matrix3d m = r * inv_s2.asDiagonal() * r.transpose();
    return 0.5 * (m + m.transpose());
}

namespace {

// Spatial hash over primitive means with cell size r_dup; used for duplicate
// suppression during spawning.
struct DedupHash {
    double cell;
    std::unordered_map<std::int64_t, std::vector<Eigen::Vector3d>> cells;

    explicit DedupHash(double cell_size) : cell(cell_size) {}

    static std::int64_t key(int ix, int iy, int iz) {
        return (static_cast<std::int64_t>(ix) * 73856093) ^
               (static_cast<std::int64_t>(iy) * 19349663) ^
               (static_cast<std::int64_t>(iz) * 83492791);
    }

    Eigen::Vector3i cell_of(const Eigen::Vector3d& p) const {
        return {static_cast<int>(std::floor(p.x() / cell)),
                static_cast<int>(std::floor(p.y() / cell)),
                static_cast<int>(std::floor(p.z() / cell))};
    }

    void insert(const Eigen::Vector3d& p) {
        const auto c = cell_of(p);
        cells[key(c.x(), c.y(), c.z())].push_back(p);
    }

    bool has_within(const Eigen::Vector3d& p, double radius) const {
        const auto c = cell_of(p);
        const double r2 = radius * radius;
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dz = -1; dz <= 1; ++dz) {
                    const auto it = cells.find(key(c.x() + dx, c.y() + dy, c.z() + dz));
                    if (it == cells.end()) continue;
                    for (const auto& q : it->second) {
                        if ((q - p).squaredNorm() < r2) return true;
                    }
                }
        return false;
    }
};

double logit(double p) { return std::log(p / (1.0 - p)); }

}  // namespace

void spawn_gaussians(const std::vector<LabeledPoint>& points, SplatField& field,
                     const Pose3& lidar_pose_world, const SpawnConfig& cfg) {
    DedupHash hash(cfg.r_dup);
    for (const auto& g : field.primitives) hash.insert(g.mu);

    const double o0 = logit(cfg.alpha0);
    const double s_hi = std::min(cfg.s_max, cfg.scale_max);
    for (const auto& pt : points) {
        const Eigen::Vector3d mu = lidar_pose_world.apply(pt.p_lidar);
        if (hash.has_within(mu, cfg.r_dup)) continue;

        GaussianPrimitive g;
        g.mu = mu;
        const double range = pt.p_lidar.norm();
        const double s = std::clamp(range * cfg.delta_theta, cfg.s_min, s_hi);
        g.scale = Eigen::Vector3d::Constant(s);
        g.rot = Eigen::Quaterniond::Identity();
        g.opacity_logit = o0;
        g.cost = std::clamp(pt.cost, 0.0, 1.0);
        g.birth_frame = field.frame_counter;
        field.primitives.push_back(g);
        hash.insert(mu);
    }
}

namespace {

bool in_expanded_frustum(const Eigen::Vector3d& mu, const Pose3& world_to_cam,
                         const CameraModel& cam, double margin_rad) {
    const Eigen::Vector3d t = world_to_cam.apply(mu);
    if (t.z() <= 0.0) return false;
    const double ax = std::atan2(std::fabs(t.x()), t.z());
    const double ay = std::atan2(std::fabs(t.y()), t.z());
    return ax <= cam.half_fov_x() + margin_rad && ay <= cam.half_fov_y() + margin_rad;
}

}  // namespace

void enforce_budget(SplatField& field, const Pose3& world_to_cam, const CameraModel& cam,
                    double margin_deg) {
    if (field.primitives.size() <= field.budget) return;

    const double margin = margin_deg * M_PI / 180.0;
    const std::size_t n = field.primitives.size();
    std::vector<std::uint8_t> in_fov(n);
    for (std::size_t i = 0; i < n; ++i) {
        in_fov[i] = in_expanded_frustum(field.primitives[i].mu, world_to_cam, cam, margin);
    }

    std::size_t to_drop = n - field.budget;
    std::vector<std::uint8_t> drop(n, 0);

    // outside-frustum first, oldest first; list order breaks birth-frame ties
    for (int pass = 0; pass < 2 && to_drop > 0; ++pass) {
        const bool want_fov = pass == 1;
        std::vector<std::size_t> order;
        for (std::size_t i = 0; i < n; ++i) {
            if (static_cast<bool>(in_fov[i]) == want_fov && !drop[i]) order.push_back(i);
        }
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return field.primitives[a].birth_frame < field.primitives[b].birth_frame;
        });
        for (std::size_t i = 0; i < order.size() && to_drop > 0; ++i, --to_drop) {
            drop[order[i]] = 1;
        }
    }

    std::vector<GaussianPrimitive> kept;
    kept.reserve(field.budget);
    for (std::size_t i = 0; i < n; ++i) {
        if (!drop[i]) kept.push_back(field.primitives[i]);
    }
    field.primitives = std::move(kept);
}

double query_field(const SplatField& field, const Eigen::Vector3d& x) {
    const auto& k = kernels::active_kernels();
    double acc = 0.0;
    for (const auto& g : field.primitives) {
        const double reach = 3.0 * g.max_scale();
        const Eigen::Matrix3d p = precision_of(g);
        const double mu[3] = {g.mu.x(), g.mu.y(), g.mu.z()};
        const double prec[6] = {p(0, 0), p(0, 1), p(0, 2), p(1, 1), p(1, 2), p(2, 2)};
        k.gauss_accum_row(&acc, 1, x.x(), 0.0, x.y(), x.z(), mu, prec,
                          g.alpha_base() * g.cost, reach * reach);
    }
    return std::min(1.0, acc);
}

void dump_field(const SplatField& field, std::ostream& os) {
    os << "SPLATFIELD v1 " << field.primitives.size() << "\n";
    char buf[256];
    for (const auto& g : field.primitives) {
        std::snprintf(buf, sizeof(buf),
                      "%.9g %.9g %.9g %.9g %.9g %.9g %.9g %.9g %.9g %.9g %.9g %.9g %d\n",
                      g.mu.x(), g.mu.y(), g.mu.z(), g.scale.x(), g.scale.y(), g.scale.z(),
                      g.rot.w(), g.rot.x(), g.rot.y(), g.rot.z(), g.opacity_logit, g.cost,
                      g.birth_frame);
        os << buf;
    }
}

SplatField load_field(std::istream& is) {
    std::string magic, version;
    std::size_t count = 0;
    if (!(is >> magic >> version >> count) || magic != "SPLATFIELD" || version != "v1") {
        throw IoError("not a SPLATFIELD v1 dump");
    }
    SplatField field;
    field.primitives.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        GaussianPrimitive g;
        double w, x, y, z;
        if (!(is >> g.mu.x() >> g.mu.y() >> g.mu.z() >> g.scale.x() >> g.scale.y() >>
              g.scale.z() >> w >> x >> y >> z >> g.opacity_logit >> g.cost >>
              g.birth_frame)) {
            throw IoError("truncated SPLATFIELD dump");
        }
        g.rot = Eigen::Quaterniond(w, x, y, z).normalized();
        field.primitives.push_back(g);
        field.frame_counter = std::max(field.frame_counter, g.birth_frame);
    }
    return field;
}

}  // namespace splatnav
