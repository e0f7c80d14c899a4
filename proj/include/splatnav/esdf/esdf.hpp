// Copyright 2026 splatnav contributors
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "splatnav/core/grid.hpp"
#include "splatnav/splat/field.hpp"

namespace splatnav {

struct OccupancyGrid2D {
    Grid2Spec spec;
    std::vector<std::uint8_t> occupied;

    static OccupancyGrid2D empty(const Grid2Spec& spec) {
        return {spec, std::vector<std::uint8_t>(spec.size(), 0)};
    }
};

/// Signed distance raster: positive in free space, negative inside obstacles,
/// clamped to [-d_max, d_max].
struct EsdfGrid2D {
    Grid2Spec spec;
    std::vector<double> d;

    static EsdfGrid2D filled(const Grid2Spec& spec, double value) {
        return {spec, std::vector<double>(spec.size(), value)};
    }
};

struct EsdfConfig {
    double d_max = 100.0;           // semantic cost-to-distance scale
    double lidar_truncation = 5.0;  // LiDAR ESDF clamp
    double z_min = 0.1;             // height band used for occupancy/rasterization
    double z_max = 0.8;
};

/// Rectangle ahead of the robot where the semantic ESDF overrides the
/// geometric one: x in [0, depth], |y| <= width/2 in the robot frame.
struct FrontRegion {
    double depth = 2.0;
    double width = 4.0;
};

/// Voxel lattice of scalars; used for both cost volumes and distance volumes.
struct VoxelGrid {
    Grid3Spec spec;
    std::vector<double> values;

    static VoxelGrid filled(const Grid3Spec& spec, double value) {
        return {spec, std::vector<double>(spec.size(), value)};
    }
};

enum class VolumeMode { Analytic, SampledPoints, MeansOnly };

/// Exact signed Euclidean distance transform (two-pass lower envelope over
/// squared distances). Free cells get +distance to the nearest occupied cell
/// center, occupied cells -distance to the nearest free cell center.
EsdfGrid2D edt_signed(const OccupancyGrid2D& occ, double d_max);

/// Samples the splat field into a voxel cost volume.
///  - Analytic: voxel value = query_field at the voxel center.
///  - SampledPoints: ceil(fraction * n_pts) deterministic draws per primitive,
///    each depositing sigmoid(o) * c into its voxel with max-accumulation.
///  - MeansOnly: one deposit at each primitive mean.
VoxelGrid build_cost_volume(const SplatField& field, const Grid3Spec& spec, VolumeMode mode,
                            double fraction = 1.0, std::uint64_t seed = 0x5eed,
                            int n_pts = 32);

/// Cost-to-distance scaling d = (1 - c) * d_max, elementwise.
VoxelGrid volume_to_distance(const VoxelGrid& costs, double d_max);

/// Min-reduction of a distance volume over the voxel layers whose centers lie
/// in [z_min, z_max]. Throws EmptyBand when no layer intersects the band.
EsdfGrid2D rasterize_to_ground(const VoxelGrid& distances, double z_min, double z_max);

/// Soft inflation d' = d - r_infl * exp(-d^2 / (2 sigma^2)): pushes the zero
/// level set outward without flattening far-field distances.
EsdfGrid2D inflate_soft(const EsdfGrid2D& esdf, double r_infl, double sigma);

/// Hard per-cell selection: front-region cells read the semantic field,
/// everything else reads the geometric one.
EsdfGrid2D fuse(const EsdfGrid2D& gsplat, const EsdfGrid2D& lidar, const Pose3& robot_pose,
                const FrontRegion& region);

/// Occupancy from height-band LiDAR returns followed by the exact EDT at the
/// LiDAR truncation distance.
EsdfGrid2D lidar_esdf(const std::vector<Eigen::Vector3d>& points_world, const Grid2Spec& spec,
                      const EsdfConfig& cfg);

/// Bilinear ESDF sample at a world point; reads outside the grid return
/// `outside_value`.
double sample_esdf(const EsdfGrid2D& esdf, const Eigen::Vector2d& p, double outside_value);

/// Grayscale PFM ("Pf", scale -1.0, rows bottom-to-top) plus a `.meta` sidecar
/// with resolution/origin/d_max lines.
void write_pfm(const EsdfGrid2D& esdf, const std::string& path, double d_max);
EsdfGrid2D read_pfm(const std::string& path);

}  // namespace splatnav
