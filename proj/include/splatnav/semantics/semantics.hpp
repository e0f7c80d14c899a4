// Copyright 2026 splatnav contributors
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "splatnav/core/errors.hpp"
#include "splatnav/core/geometry.hpp"

namespace splatnav {

/// Terrain semantics. The four graded ground classes carry strictly
/// increasing traversal cost; RigidObstacle saturates to 1 so obstacles map
/// to zero distance after cost-to-distance scaling; Unknown marks pixels with
/// no semantic observation.
enum class TerrainClass : std::uint8_t {
    Stable = 0,
    Granular = 1,
    Rocky = 2,
    VegetationHighResistance = 3,
    RigidObstacle = 4,
    Unknown = 5,
};

inline constexpr int kNumTerrainClasses = 6;

std::string to_string(TerrainClass c);
TerrainClass terrain_class_from_string(const std::string& s);

/// Class -> cost table. Values are configuration, not constants; validate()
/// enforces the strict ordering of the graded classes, the [0,1] range and
/// cost(RigidObstacle) == 1.
struct CostModel {
    std::array<double, kNumTerrainClasses> cost{0.0, 0.25, 0.5, 0.85, 1.0, 0.6};

    double cost_of(TerrainClass c) const { return cost[static_cast<std::size_t>(c)]; }
    void validate() const;
};

/// Per-pixel terrain labels from the simulator's semantic camera.
struct ClassImage {
    int width = 0;
    int height = 0;
    std::vector<TerrainClass> ids;

    TerrainClass at(int u, int v) const { return ids[static_cast<std::size_t>(v) * width + u]; }
};

/// H x W grid of per-pixel traversability costs in [0,1] plus the class each
/// cost came from. Used both for ground truth and for renders (renders carry
/// Unknown class ids).
struct CostImage {
    int width = 0;
    int height = 0;
    std::vector<double> values;
    std::vector<TerrainClass> class_ids;

    static CostImage filled(int w, int h, double value,
                            TerrainClass cls = TerrainClass::Unknown);

    std::size_t idx(int u, int v) const { return static_cast<std::size_t>(v) * width + u; }
    double at(int u, int v) const { return values[idx(u, v)]; }
    bool same_size(const CostImage& o) const { return width == o.width && height == o.height; }
};

/// A LiDAR return with its camera-frame position and the semantic cost picked
/// up from the costmap.
struct LabeledPoint {
    Eigen::Vector3d p_lidar = Eigen::Vector3d::Zero();
    Eigen::Vector3d p_cam = Eigen::Vector3d::Zero();
    double cost = 0.0;
    TerrainClass cls = TerrainClass::Unknown;
};

/// Pixel-wise application of the cost model to an oracle class image.
CostImage segment(const ClassImage& classes, const CostModel& model);

/// Transforms sensor-frame points into the camera, projects them, and labels
/// each in-view point with the nearest pixel's cost/class. Out-of-view points
/// (behind the near plane or outside the image) are dropped.
std::vector<LabeledPoint> associate_costs(const std::vector<Eigen::Vector3d>& points,
                                          const Pose3& T_lidar_to_cam,
                                          const CameraModel& cam, const CostImage& costmap);

}  // namespace splatnav
