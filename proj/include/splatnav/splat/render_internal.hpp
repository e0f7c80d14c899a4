// Copyright 2026 splatnav contributors
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "splatnav/splat/render.hpp"

namespace splatnav::detail {

/// Compositing truncation radius in units of the dominant screen-space sigma.
/// exp(-0.5 * 7.5^2) ~ 6e-13, below every rendering tolerance in use, so the
/// boxed rasterization is interchangeable with an untruncated evaluation.
inline constexpr double kRenderRadiusSigma = 7.5;

/// Projection record kept per non-culled primitive, with everything the
/// backward pass needs to chain image gradients to world-space means.
struct ProjEntry {
    std::size_t prim_index = 0;
    Eigen::Vector2d mean2d = Eigen::Vector2d::Zero();
    Eigen::Matrix2d cov2d = Eigen::Matrix2d::Identity();
    Eigen::Matrix2d prec = Eigen::Matrix2d::Identity();
    Eigen::Vector3d t_cam = Eigen::Vector3d::Zero();     // camera-frame mean
    Eigen::Matrix3d cov_cam = Eigen::Matrix3d::Identity();  // W Sigma W^T
    Eigen::Matrix<double, 2, 3> jac = Eigen::Matrix<double, 2, 3>::Zero();
    double depth = 0.0;
    double alpha_base = 0.0;
    double cost = 0.0;
    int x0 = 0, x1 = -1, y0 = 0, y1 = -1;  // inclusive compositing box
};

/// Forward render with per-pixel pair lists retained for the backward pass.
/// pair_* arrays are CSR slots addressed by offsets[pixel]..offsets[pixel+1].
struct RenderCache {
    std::vector<ProjEntry> kept;
    std::vector<std::size_t> offsets;
    std::vector<std::uint32_t> pair_gauss;  // index into kept
    std::vector<double> pair_alpha;
    std::vector<double> pair_trans;  // transmittance before this pair
    std::vector<double> final_trans;
    CostImage image;
    Eigen::Matrix3d world_rot = Eigen::Matrix3d::Identity();
};

std::optional<ProjEntry> project_entry(const GaussianPrimitive& g, const Pose3& world_to_cam,
                                       const CameraModel& cam);

void render_with_cache(const SplatField& field, const Pose3& world_to_cam,
                       const CameraModel& cam, double c_bg, RenderCache& cache);

}  // namespace splatnav::detail
