// Copyright 2026 splatnav contributors
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <variant>
#include <vector>

#include "splatnav/core/geometry.hpp"
#include "splatnav/semantics/semantics.hpp"

namespace splatnav {

struct CylinderShape {
    Eigen::Vector2d center = Eigen::Vector2d::Zero();
    double radius = 0.5;
    double height = 1.0;
};

struct BoxShape {
    Eigen::Vector2d center = Eigen::Vector2d::Zero();
    Eigen::Vector2d half_extents = Eigen::Vector2d::Ones();
    double yaw = 0.0;
    double height = 1.0;
};

/// A scene obstacle: geometry plus semantics. Pliable obstacles return LiDAR
/// points like everything else (that ambiguity is the point), but the robot
/// may drive through them; only VegetationHighResistance may be pliable.
struct Obstacle {
    std::variant<CylinderShape, BoxShape> shape;
    TerrainClass cls = TerrainClass::RigidObstacle;
    bool pliable = false;
};

/// Convex ground polygon carrying a terrain class.
struct TerrainPatch {
    std::vector<Eigen::Vector2d> polygon;
    TerrainClass cls = TerrainClass::Stable;
};

struct Scene {
    std::vector<Obstacle> obstacles;
    std::vector<TerrainPatch> patches;
    Eigen::Vector2d bounds_min{-20.0, -20.0};
    Eigen::Vector2d bounds_max{20.0, 20.0};
    TerrainClass default_ground = TerrainClass::Stable;
    Eigen::Vector2d start{0.0, 0.0};
    double start_heading = 0.0;
    Eigen::Vector2d goal{5.0, 0.0};

    void validate() const;
};

struct LidarConfig {
    int channels = 32;
    double vertical_fov_deg = 22.5;  // +/- from horizontal
    int azimuth_steps = 512;
    double max_range = 30.0;
    double sigma_r = 0.0;  // range noise std dev

    double delta_theta() const { return 2.0 * M_PI / azimuth_steps; }
};

struct RobotLimits {
    double v_max = 1.2;       // m/s
    double omega_max = 1.5;   // rad/s
};

struct RobotState {
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;
    double v = 0.0;
    double omega = 0.0;
    double radius = 0.3;
    double t = 0.0;

    Eigen::Vector2d position() const { return {x, y}; }
};

struct CameraMount {
    double height = 0.5;
    double pitch_deg = -10.0;  // negative looks down
};

/// World pose of a camera rigidly mounted at the robot heading (z optical
/// axis, x right, y down).
Pose3 camera_pose_world(const RobotState& s, const CameraMount& mount);

/// World pose of the LiDAR (x forward, z up) at the given mast height.
Pose3 lidar_pose_world(const RobotState& s, double height);

struct LidarScan {
    std::vector<Eigen::Vector3d> points_sensor;
    std::vector<double> ranges;
};

/// Spins (channels x azimuth_steps) rays and returns the nearest hit per ray
/// among obstacle surfaces and the ground plane, within max_range. Pliable
/// obstacles return points exactly like rigid ones.
LidarScan lidar_scan(const Scene& scene, const Pose3& sensor_pose, const LidarConfig& cfg,
                     std::uint64_t seed);

/// Nearest-hit semantic oracle render: obstacle class, ground patch class
/// (first matching patch in list order, else default ground) or Unknown on
/// miss.
ClassImage semantic_camera(const Scene& scene, const Pose3& cam_pose, const CameraModel& cam);

/// Unicycle step with actuator clamping and heading wrapped to (-pi, pi].
RobotState step_robot(const RobotState& s, double v_cmd, double omega_cmd, double dt,
                      const RobotLimits& limits);

enum class Contact { Free, PliableContact, RigidCollision };

/// Robot disc vs obstacle footprints; any rigid overlap dominates.
Contact check_collision(const Scene& scene, const RobotState& s);

}  // namespace splatnav
