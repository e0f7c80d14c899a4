// Copyright 2026 splatnav contributors
// Licensed under the Apache License, Version 2.0.

#include "splatnav/splat/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "splatnav/core/kernels.hpp"
#include "splatnav/splat/render_internal.hpp"
#include "splatnav/splat/ssim.hpp"

namespace splatnav {
namespace detail {

namespace {

// Eigenvalues of a symmetric 2x2, ascending.
inline void eig2_sym(const Eigen::Matrix2d& m, double& lo, double& hi) {
    const double tr = m(0, 0) + m(1, 1);
    const double d = m(0, 0) - m(1, 1);
    const double disc = std::sqrt(d * d + 4.0 * m(0, 1) * m(0, 1));
    lo = 0.5 * (tr - disc);
    hi = 0.5 * (tr + disc);
}

inline Eigen::Matrix2d floor_eigenvalues(const Eigen::Matrix2d& m, double floor_val,
                                         double lo, double hi) {
    if (lo >= floor_val) return m;
    // eigenvector angle of a symmetric 2x2
    const double theta = 0.5 * std::atan2(2.0 * m(0, 1), m(0, 0) - m(1, 1));
    const double c = std::cos(theta), s = std::sin(theta);
    const double l1 = std::max(hi, floor_val);
    const double l2 = std::max(lo, floor_val);
    Eigen::Matrix2d out;
    out(0, 0) = l1 * c * c + l2 * s * s;
    out(0, 1) = (l1 - l2) * c * s;
    out(1, 0) = out(0, 1);
    out(1, 1) = l1 * s * s + l2 * c * c;
    return out;
}

}  // namespace

std::optional<ProjEntry> project_entry(const GaussianPrimitive& g, const Pose3& world_to_cam,
                                       const CameraModel& cam) {
    const Eigen::Vector3d t = world_to_cam.apply(g.mu);
    if (t.z() < cam.z_near) return std::nullopt;

    ProjEntry e;
    e.t_cam = t;
    e.mean2d = Eigen::Vector2d(cam.fx * t.x() / t.z() + cam.cx,
                               cam.fy * t.y() / t.z() + cam.cy);
    e.depth = t.z();
    e.alpha_base = g.alpha_base();
    e.cost = g.cost;

    const Eigen::Matrix3d w_rot = world_to_cam.rotation_matrix();
    e.cov_cam = w_rot * covariance_of(g) * w_rot.transpose();

    const double z = t.z();
    Eigen::Matrix<double, 2, 3> jac;
    jac << cam.fx / z, 0.0, -cam.fx * t.x() / (z * z),
           0.0, cam.fy / z, -cam.fy * t.y() / (z * z);
    e.jac = jac;

    Eigen::Matrix2d cov = jac * e.cov_cam * jac.transpose();
    cov(0, 1) = cov(1, 0) = 0.5 * (cov(0, 1) + cov(1, 0));

    double lo, hi;
    eig2_sym(cov, lo, hi);
    cov = floor_eigenvalues(cov, kCovFloor, lo, hi);
    eig2_sym(cov, lo, hi);
    e.cov2d = cov;

    // cull when the 3-sigma box misses the image rectangle
    const double r3 = 3.0 * std::sqrt(hi);
    if (e.mean2d.x() + r3 < 0.0 || e.mean2d.x() - r3 > cam.width - 1 ||
        e.mean2d.y() + r3 < 0.0 || e.mean2d.y() - r3 > cam.height - 1) {
        return std::nullopt;
    }

    const double det = cov(0, 0) * cov(1, 1) - cov(0, 1) * cov(0, 1);
    const double inv_det = 1.0 / det;
    e.prec(0, 0) = cov(1, 1) * inv_det;
    e.prec(1, 1) = cov(0, 0) * inv_det;
    e.prec(0, 1) = e.prec(1, 0) = -cov(0, 1) * inv_det;

    // compositing box: wide enough that truncated tails are < 1e-12
    const double rr = kRenderRadiusSigma * std::sqrt(hi);
    e.x0 = std::max(0, static_cast<int>(std::ceil(e.mean2d.x() - rr)));
    e.x1 = std::min(cam.width - 1, static_cast<int>(std::floor(e.mean2d.x() + rr)));
    e.y0 = std::max(0, static_cast<int>(std::ceil(e.mean2d.y() - rr)));
    e.y1 = std::min(cam.height - 1, static_cast<int>(std::floor(e.mean2d.y() + rr)));
    return e;
}

void render_with_cache(const SplatField& field, const Pose3& world_to_cam,
                       const CameraModel& cam, double c_bg, RenderCache& cache) {
    if (!cam.valid()) throw ConfigError("render: invalid camera");
    const auto& kern = kernels::active_kernels();
    const int w = cam.width, h = cam.height;
    const std::size_t npix = static_cast<std::size_t>(w) * h;

    cache = RenderCache{};
    cache.world_rot = world_to_cam.rotation_matrix();

    for (std::size_t i = 0; i < field.primitives.size(); ++i) {
        auto e = project_entry(field.primitives[i], world_to_cam, cam);
        if (!e) continue;
        e->prim_index = i;
        if (e->x0 > e->x1 || e->y0 > e->y1) continue;  // box off-image
        cache.kept.push_back(*e);
    }

    // global front-to-back order; ties broken by content so any input
    // permutation renders byte-identically
    std::sort(cache.kept.begin(), cache.kept.end(), [&](const ProjEntry& a, const ProjEntry& b) {
        if (a.depth != b.depth) return a.depth < b.depth;
        const auto& ga = field.primitives[a.prim_index];
        const auto& gb = field.primitives[b.prim_index];
        if (ga.birth_frame != gb.birth_frame) return ga.birth_frame < gb.birth_frame;
        if (ga.mu.x() != gb.mu.x()) return ga.mu.x() < gb.mu.x();
        if (ga.mu.y() != gb.mu.y()) return ga.mu.y() < gb.mu.y();
        if (ga.mu.z() != gb.mu.z()) return ga.mu.z() < gb.mu.z();
        if (ga.cost != gb.cost) return ga.cost < gb.cost;
        return ga.opacity_logit < gb.opacity_logit;
    });

    // CSR pixel -> (gaussian, alpha) pair lists, filled in depth order
    std::vector<std::uint32_t> counts(npix + 1, 0);
    for (const auto& e : cache.kept) {
        for (int y = e.y0; y <= e.y1; ++y) {
            std::uint32_t* row = counts.data() + 1 + static_cast<std::size_t>(y) * w;
            for (int x = e.x0; x <= e.x1; ++x) ++row[x];
        }
    }
    cache.offsets.resize(npix + 1);
    std::partial_sum(counts.begin(), counts.end(), cache.offsets.begin());
    const std::size_t total = cache.offsets[npix];
    cache.pair_gauss.resize(total);
    cache.pair_alpha.resize(total);
    cache.pair_trans.resize(total);

    std::vector<std::size_t> cursor(cache.offsets.begin(), cache.offsets.end() - 1);
    std::vector<double> row_alpha(w);
    for (std::uint32_t ki = 0; ki < cache.kept.size(); ++ki) {
        const auto& e = cache.kept[ki];
        const int run = e.x1 - e.x0 + 1;
        for (int y = e.y0; y <= e.y1; ++y) {
            kern.gauss_alpha_row(row_alpha.data(), run, e.x0, y, e.mean2d.x(), e.mean2d.y(),
                                 e.prec(0, 0), e.prec(0, 1), e.prec(1, 1), e.alpha_base);
            for (int x = e.x0; x <= e.x1; ++x) {
                const std::size_t pix = static_cast<std::size_t>(y) * w + x;
                const std::size_t slot = cursor[pix]++;
                cache.pair_gauss[slot] = ki;
                cache.pair_alpha[slot] = row_alpha[x - e.x0];
            }
        }
    }

    // composite
    cache.image = CostImage::filled(w, h, 0.0, TerrainClass::Unknown);
    cache.final_trans.assign(npix, 1.0);
    for (std::size_t pix = 0; pix < npix; ++pix) {
        double trans = 1.0;
        double value = 0.0;
        for (std::size_t s = cache.offsets[pix]; s < cache.offsets[pix + 1]; ++s) {
            const double a = cache.pair_alpha[s];
            cache.pair_trans[s] = trans;
            value += cache.kept[cache.pair_gauss[s]].cost * a * trans;
            trans *= 1.0 - a;
        }
        cache.final_trans[pix] = trans;
        value += trans * c_bg;
        cache.image.values[pix] = std::min(1.0, std::max(0.0, value));
    }
}

}  // namespace detail

std::optional<ProjectedGaussian> project_gaussian(const GaussianPrimitive& g,
                                                  const Pose3& world_to_cam,
                                                  const CameraModel& cam) {
    if (!cam.valid()) throw ConfigError("project_gaussian: invalid camera");
    const auto e = detail::project_entry(g, world_to_cam, cam);
    if (!e) return std::nullopt;
    ProjectedGaussian out;
    out.mean2d = e->mean2d;
    out.cov2d = e->cov2d;
    out.depth = e->depth;
    out.alpha_base = e->alpha_base;
    out.cost = e->cost;
    return out;
}

CostImage render_cost_map(const SplatField& field, const Pose3& world_to_cam,
                          const CameraModel& cam, double c_bg) {
    detail::RenderCache cache;
    detail::render_with_cache(field, world_to_cam, cam, c_bg, cache);
    return std::move(cache.image);
}

}  // namespace splatnav
