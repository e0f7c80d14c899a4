// Copyright 2026 splatnav contributors
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <iosfwd>
#include <vector>

#include "splatnav/core/geometry.hpp"
#include "splatnav/semantics/semantics.hpp"

namespace splatnav {

/// One anisotropic Gaussian primitive. Covariance is kept factorized as
/// rot * diag(scale)^2 * rot^T; scale holds per-axis standard deviations.
/// The cost channel replaces color: a scalar traversability value in [0,1].
struct GaussianPrimitive {
    Eigen::Vector3d mu = Eigen::Vector3d::Zero();
    Eigen::Vector3d scale = Eigen::Vector3d::Ones();
    Eigen::Quaterniond rot = Eigen::Quaterniond::Identity();
    double opacity_logit = 0.0;
    double cost = 0.0;
    int birth_frame = 0;

    double max_scale() const { return scale.maxCoeff(); }
    double alpha_base() const { return 1.0 / (1.0 + std::exp(-opacity_logit)); }
};

/// Reconstructed world-frame covariance rot * diag(scale)^2 * rot^T.
Eigen::Matrix3d covariance_of(const GaussianPrimitive& g);

/// Inverse covariance rot * diag(scale)^-2 * rot^T, formed directly from the
/// factorization (never by matrix inversion).
Eigen::Matrix3d precision_of(const GaussianPrimitive& g);

struct SpawnConfig {
    double delta_theta = 2.0 * M_PI / 512.0;  // LiDAR azimuth step, radians
    double s_min = 0.1;                       // spawn scale clamp, meters
    double s_max = 0.5;
    double scale_max = 2.0;  // hard cap on any stored scale component
    double r_dup = 0.15;     // duplicate-suppression radius, meters
    double alpha0 = 0.7;     // spawn opacity
};

/// Bounded set of primitives plus the frame counter used for age-based
/// pruning. Single writer; readers take value snapshots at frame boundaries.
struct SplatField {
    std::vector<GaussianPrimitive> primitives;
    std::size_t budget = 20000;
    int frame_counter = 0;
};

/// Appends one primitive per labeled point that is not within r_dup of an
/// existing (or just-spawned) primitive mean. Spawn scale is isotropic
/// clamp(range * delta_theta, s_min, s_max) where range is the sensor-frame
/// distance of the return.
void spawn_gaussians(const std::vector<LabeledPoint>& points, SplatField& field,
                     const Pose3& lidar_pose_world, const SpawnConfig& cfg);

/// Enforces the primitive budget: when over budget, drops primitives outside
/// the camera frustum (expanded by margin_deg) oldest-first, then in-frustum
/// primitives oldest-first.
void enforce_budget(SplatField& field, const Pose3& world_to_cam, const CameraModel& cam,
                    double margin_deg = 10.0);

/// Continuous traversability field: min(1, sum_i sigmoid(o_i) c_i G_i(x)),
/// skipping primitives farther than 3 * max(scale) from x.
double query_field(const SplatField& field, const Eigen::Vector3d& x);

/// Line-oriented text snapshot: header "SPLATFIELD v1 <count>", then one
/// primitive per line (mu[3] scale[3] quat[wxyz] opacity_logit cost
/// birth_frame), 9 significant digits.
void dump_field(const SplatField& field, std::ostream& os);
SplatField load_field(std::istream& is);

}  // namespace splatnav
