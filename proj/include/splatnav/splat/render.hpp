// Copyright 2026 splatnav contributors
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "splatnav/core/geometry.hpp"
#include "splatnav/semantics/semantics.hpp"
#include "splatnav/splat/field.hpp"

namespace splatnav {

/// Anti-aliasing floor on projected covariance eigenvalues, px^2.
inline constexpr double kCovFloor = 0.3;

/// A primitive after projection into a camera. cov2d eigenvalues are floored
/// at kCovFloor; depth is the camera-frame z of the mean.
struct ProjectedGaussian {
    Eigen::Vector2d mean2d = Eigen::Vector2d::Zero();
    Eigen::Matrix2d cov2d = Eigen::Matrix2d::Identity();
    double depth = 0.0;
    double alpha_base = 0.0;
    double cost = 0.0;
};

/// EWA-style projection: cov2d = J W Sigma W^T J^T with J the pinhole Jacobian
/// at the camera-frame mean and W the rotation of world_to_cam. Returns
/// nullopt (culled) when the mean is in front of the near plane or the
/// 3-sigma screen extent misses the image rectangle.
std::optional<ProjectedGaussian> project_gaussian(const GaussianPrimitive& g,
                                                  const Pose3& world_to_cam,
                                                  const CameraModel& cam);

/// Front-to-back alpha blending of the field into a cost image, composited
/// over a uniform background of cost c_bg (the Unknown-class cost). Output
/// class ids are all Unknown.
CostImage render_cost_map(const SplatField& field, const Pose3& world_to_cam,
                          const CameraModel& cam, double c_bg = 0.6);

struct OptimizeRates {
    double mu = 2e-3;
    double opacity = 5e-2;
    double cost = 2e-1;
};

/// Analytic gradients of the L1+SSIM loss through the blend, one entry per
/// primitive (zeros for culled primitives). The mean gradient chains through
/// both the projected mean and the projected covariance.
struct FieldGradients {
    std::vector<Eigen::Vector3d> mu;
    std::vector<double> opacity;
    std::vector<double> cost;
};

/// Renders, evaluates the loss against ground truth, and backpropagates to
/// {mu_i, o_i, c_i}. Returns the loss value.
double compute_loss_gradients(const SplatField& field, const Pose3& world_to_cam,
                              const CameraModel& cam, const CostImage& ground_truth,
                              FieldGradients& grads, double c_bg = 0.6);

/// One gradient-descent step on {mu_i, o_i, c_i} of every non-culled primitive
/// using analytic gradients of the L1+SSIM loss through the blend. Scale and
/// rotation stay fixed; costs are clamped to [0,1]. Returns the pre-step loss.
double optimize_step(SplatField& field, const Pose3& world_to_cam, const CameraModel& cam,
                     const CostImage& ground_truth, const OptimizeRates& rates,
                     double c_bg = 0.6);

}  // namespace splatnav
