// Copyright 2026 splatnav contributors
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <cstdint>

#include "splatnav/esdf/esdf.hpp"
#include "splatnav/harness/metrics.hpp"
#include "splatnav/planner/mppi.hpp"
#include "splatnav/splat/render.hpp"
#include "splatnav/worldsim/world.hpp"

namespace splatnav {

/// Everything the closed loop needs, grouped by stage. Scene files may
/// override any of it under their "config" key.
struct PipelineConfig {
    CameraModel camera{60.0, 60.0, 47.5, 35.5, 96, 72, 0.05};
    CameraMount cam_mount{0.5, -10.0};
    LidarConfig lidar;
    double lidar_height = 0.5;

    CostModel costs;
    SpawnConfig spawn;
    std::size_t budget = 20000;
    double budget_margin_deg = 10.0;

    int optimize_steps = 5;
    OptimizeRates rates{2e-3, 1.5e-1, 3e-1};

    VolumeMode volume_mode = VolumeMode::SampledPoints;
    double volume_fraction = 1.0;
    std::uint64_t volume_seed = 0x5eed;
    int volume_n_pts = 32;

    // local map window, re-anchored to the robot each mapping tick
    double map_resolution = 0.15;
    int map_cells = 200;
    double volume_z0 = 0.15;  // first voxel-layer center
    int volume_layers = 5;

    EsdfConfig esdf{5.0, 5.0, 0.1, 0.8};
    double inflate_r = 0.45;
    double inflate_sigma = 0.6;
    FrontRegion front{2.0, 4.0};

    MppiParams mppi;

    double waypoint_spacing = 25.0;
    double r_wp = 2.0;
    double r_goal = 0.5;
    double max_time = 90.0;
    int control_per_map = 5;
    double freeze_window = 10.0;
    double freeze_eps = 0.2;

    bool geometric_only = false;  // skip the splat pipeline, plan on LiDAR alone

    double c_bg() const { return costs.cost_of(TerrainClass::Unknown); }
    void validate() const;
};

struct NavigationResult {
    Outcome outcome = Outcome::Timeout;
    Trajectory trajectory;
    double time_to_goal = 0.0;  // valid when Reached
    double freeze_time = 0.0;   // valid when Frozen
    SplatField field;           // final state of the splat map
    EsdfGrid2D fused;           // last fused grid
};

/// One mapping tick at the given robot state: sense, label, spawn, optimize,
/// prune, build the cost volume, convert, rasterize, inflate and fuse.
/// Exposed for the `map` CLI subcommand and the performance budget check.
struct MapTick {
    EsdfGrid2D gsplat;
    EsdfGrid2D lidar;
    EsdfGrid2D fused;
};
MapTick run_map_tick(const Scene& scene, const RobotState& s, SplatField& field,
                     const PipelineConfig& cfg, std::uint64_t scan_seed);

/// The full closed loop: map at 1/control_per_map of the control rate, track
/// straight-line waypoints with MPPI, stop on goal, rigid collision, freeze
/// or timeout. Deterministic given the seed.
NavigationResult navigate(const Scene& scene, const PipelineConfig& cfg, std::uint64_t seed);

}  // namespace splatnav
