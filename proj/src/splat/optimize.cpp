// Copyright 2026 splatnav contributors
// Licensed under the Apache License, Version 2.0.

#include <algorithm>
#include <cmath>

#include "splatnav/splat/render.hpp"
#include "splatnav/splat/render_internal.hpp"
#include "splatnav/splat/ssim.hpp"

namespace splatnav {

double compute_loss_gradients(const SplatField& field, const Pose3& world_to_cam,
                              const CameraModel& cam, const CostImage& ground_truth,
                              FieldGradients& grads, double c_bg) {
    if (ground_truth.width != cam.width || ground_truth.height != cam.height) {
        throw DimensionMismatch("optimize: ground truth does not match camera size");
    }

    detail::RenderCache cache;
    detail::render_with_cache(field, world_to_cam, cam, c_bg, cache);

    std::vector<double> grad_img;
    const double loss_val = loss_with_grad(cache.image, ground_truth, grad_img);

    const std::size_t nk = cache.kept.size();
    std::vector<double> gc(nk, 0.0), go(nk, 0.0);
    std::vector<Eigen::Vector2d> gmean(nk, Eigen::Vector2d::Zero());
    std::vector<Eigen::Matrix2d> gcov(nk, Eigen::Matrix2d::Zero());

    // Per-pixel backward walk over the blend, back to front. `suffix` carries
    // the blended contribution behind the current pair, which is exactly what
    // the transmittance derivative needs.
    const int w = cam.width;
    for (std::size_t pix = 0; pix < grad_img.size(); ++pix) {
        const double g = grad_img[pix];
        if (g == 0.0) continue;
        const std::size_t begin = cache.offsets[pix], end = cache.offsets[pix + 1];
        if (begin == end) continue;
        const double px = static_cast<double>(pix % w);
        const double py = static_cast<double>(pix / w);
        double suffix = cache.final_trans[pix] * c_bg;
        for (std::size_t s = end; s-- > begin;) {
            const std::uint32_t ki = cache.pair_gauss[s];
            const auto& e = cache.kept[ki];
            const double a = cache.pair_alpha[s];
            const double t = cache.pair_trans[s];

            gc[ki] += g * a * t;

            const double dvalue_dalpha = e.cost * t - suffix / (1.0 - a);
            const double ga = g * dvalue_dalpha;
            go[ki] += ga * a * (1.0 - e.alpha_base);

            const Eigen::Vector2d d(px - e.mean2d.x(), py - e.mean2d.y());
            const Eigen::Vector2d pd = e.prec * d;
            gmean[ki] += (ga * a) * pd;
            gcov[ki] += (ga * a * 0.5) * (pd * pd.transpose());

            suffix += e.cost * a * t;
        }
    }

    const std::size_t n = field.primitives.size();
    grads.mu.assign(n, Eigen::Vector3d::Zero());
    grads.opacity.assign(n, 0.0);
    grads.cost.assign(n, 0.0);

    const Eigen::Matrix3d world_rot_t = cache.world_rot.transpose();
    for (std::size_t ki = 0; ki < nk; ++ki) {
        const auto& e = cache.kept[ki];

        Eigen::Vector3d grad_t = e.jac.transpose() * gmean[ki];

        // covariance path: Sigma' = J M J^T with M fixed, so
        // dSigma'/dt_m = A_m M J^T + (A_m M J^T)^T with A_m = dJ/dt_m
        const double x = e.t_cam.x(), y = e.t_cam.y(), z = e.t_cam.z();
        const double inv_z2 = 1.0 / (z * z);
        const Eigen::Matrix<double, 3, 2> mjt = e.cov_cam * e.jac.transpose();

        Eigen::Matrix<double, 2, 3> a_m = Eigen::Matrix<double, 2, 3>::Zero();
        a_m(0, 2) = -cam.fx * inv_z2;
        grad_t.x() += 2.0 * gcov[ki].cwiseProduct(a_m * mjt).sum();

        a_m.setZero();
        a_m(1, 2) = -cam.fy * inv_z2;
        grad_t.y() += 2.0 * gcov[ki].cwiseProduct(a_m * mjt).sum();

        a_m.setZero();
        a_m(0, 0) = -cam.fx * inv_z2;
        a_m(1, 1) = -cam.fy * inv_z2;
        a_m(0, 2) = 2.0 * cam.fx * x / (z * z * z);
        a_m(1, 2) = 2.0 * cam.fy * y / (z * z * z);
        grad_t.z() += 2.0 * gcov[ki].cwiseProduct(a_m * mjt).sum();

        grads.mu[e.prim_index] = world_rot_t * grad_t;
        grads.opacity[e.prim_index] = go[ki];
        grads.cost[e.prim_index] = gc[ki];
    }

    return loss_val;
}

double optimize_step(SplatField& field, const Pose3& world_to_cam, const CameraModel& cam,
                     const CostImage& ground_truth, const OptimizeRates& rates,
                     double c_bg) {
    FieldGradients grads;
    const double loss_val =
        compute_loss_gradients(field, world_to_cam, cam, ground_truth, grads, c_bg);

    for (std::size_t i = 0; i < field.primitives.size(); ++i) {
        auto& prim = field.primitives[i];
        prim.mu -= rates.mu * grads.mu[i];
        prim.opacity_logit -= rates.opacity * grads.opacity[i];
        prim.cost = std::clamp(prim.cost - rates.cost * grads.cost[i], 0.0, 1.0);
    }
    return loss_val;
}

}  // namespace splatnav
