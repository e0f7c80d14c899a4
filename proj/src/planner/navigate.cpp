// Copyright 2026 splatnav contributors
// Licensed under the Apache License, Version 2.0.

#include "splatnav/planner/navigate.hpp"

#include <cmath>

#include "splatnav/core/errors.hpp"
#include "splatnav/semantics/semantics.hpp"

namespace splatnav {
namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

// Local window centered on the robot, snapped to the global cell lattice so
// repeated ticks sample identical world positions.
Grid2Spec local_window(const PipelineConfig& cfg, const RobotState& s) {
    Grid2Spec spec;
    spec.resolution = cfg.map_resolution;
    spec.nx = cfg.map_cells;
    spec.ny = cfg.map_cells;
    const double half = 0.5 * cfg.map_cells * cfg.map_resolution;
    spec.origin.x() = std::floor((s.x - half) / cfg.map_resolution) * cfg.map_resolution;
    spec.origin.y() = std::floor((s.y - half) / cfg.map_resolution) * cfg.map_resolution;
    return spec;
}

}  // namespace

void PipelineConfig::validate() const {
    if (!camera.valid()) throw ConfigError("pipeline: invalid camera");
    costs.validate();
    mppi.validate();
    if (map_resolution <= 0.0 || map_cells < 8) throw ConfigError("pipeline: bad map grid");
    if (control_per_map < 1) throw ConfigError("pipeline: control_per_map must be >= 1");
    if (esdf.d_max <= 0.0 || esdf.lidar_truncation <= 0.0) {
        throw ConfigError("pipeline: bad esdf config");
    }
    if (volume_layers < 1) throw ConfigError("pipeline: need at least one volume layer");
}

MapTick run_map_tick(const Scene& scene, const RobotState& s, SplatField& field,
                     const PipelineConfig& cfg, std::uint64_t scan_seed) {
    const Pose3 lidar_pose = lidar_pose_world(s, cfg.lidar_height);
    const LidarScan scan = lidar_scan(scene, lidar_pose, cfg.lidar, scan_seed);

    MapTick tick;

    // geometric side: current-sweep occupancy + exact EDT
    const Grid2Spec window = local_window(cfg, s);
    std::vector<Eigen::Vector3d> world_points;
    world_points.reserve(scan.points_sensor.size());
    for (const auto& p : scan.points_sensor) world_points.push_back(lidar_pose.apply(p));
    tick.lidar = lidar_esdf(world_points, window, cfg.esdf);

    if (cfg.geometric_only) {
        tick.gsplat = tick.lidar;
        tick.fused = tick.lidar;
        return tick;
    }

    // semantic side
    const Pose3 cam_pose = camera_pose_world(s, cfg.cam_mount);
    const Pose3 world_to_cam = cam_pose.inverse();
    const CostImage gt = segment(semantic_camera(scene, cam_pose, cfg.camera), cfg.costs);
    const Pose3 lidar_to_cam = world_to_cam.compose(lidar_pose);
    const auto labeled = associate_costs(scan.points_sensor, lidar_to_cam, cfg.camera, gt);

    spawn_gaussians(labeled, field, lidar_pose, cfg.spawn);
    for (int i = 0; i < cfg.optimize_steps; ++i) {
        optimize_step(field, world_to_cam, cfg.camera, gt, cfg.rates, cfg.c_bg());
    }
    field.budget = cfg.budget;
    enforce_budget(field, world_to_cam, cfg.camera, cfg.budget_margin_deg);

    Grid3Spec vol_spec;
    vol_spec.resolution = cfg.map_resolution;
    vol_spec.origin = {window.origin.x(), window.origin.y(), cfg.volume_z0};
    vol_spec.nx = window.nx;
    vol_spec.ny = window.ny;
    vol_spec.nz = cfg.volume_layers;

    const VoxelGrid costs = build_cost_volume(field, vol_spec, cfg.volume_mode,
                                              cfg.volume_fraction, cfg.volume_seed,
                                              cfg.volume_n_pts);
    const VoxelGrid dist = volume_to_distance(costs, cfg.esdf.d_max);
    tick.gsplat = rasterize_to_ground(dist, cfg.esdf.z_min, cfg.esdf.z_max);
    tick.gsplat = inflate_soft(tick.gsplat, cfg.inflate_r, cfg.inflate_sigma);

    const Pose3 robot_pose =
        Pose3::from_axis_angle(Eigen::Vector3d::UnitZ(), s.heading, {s.x, s.y, 0.0});
    tick.fused = fuse(tick.gsplat, tick.lidar, robot_pose, cfg.front);
    return tick;
}

NavigationResult navigate(const Scene& scene, const PipelineConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    scene.validate();

    NavigationResult result;
    RobotState s;
    s.x = scene.start.x();
    s.y = scene.start.y();
    s.heading = scene.start_heading;

    const WaypointPlan plan = make_waypoints(scene.start, scene.goal, cfg.waypoint_spacing);
    std::size_t active_wp = 0;

    std::vector<Control> nominal(cfg.mppi.horizon);
    result.trajectory.push_back(s);
    result.field.budget = cfg.budget;

    EsdfGrid2D fused;
    int map_ticks = 0;

    const int max_steps = static_cast<int>(std::ceil(cfg.max_time / cfg.mppi.dt));
    for (int step = 0; step < max_steps; ++step) {
        if (step % cfg.control_per_map == 0) {
            result.field.frame_counter = map_ticks;
            fused = run_map_tick(scene, s, result.field, cfg, mix_seed(seed, 1000 + map_ticks))
                        .fused;
            ++map_ticks;
        }

        while (active_wp + 1 < plan.waypoints.size() &&
               (s.position() - plan.waypoints[active_wp]).norm() < cfg.r_wp) {
            ++active_wp;
        }

        const auto mp = mppi_step(s, fused, plan.waypoints[active_wp], nominal, cfg.mppi,
                                  mix_seed(seed, step));
        nominal = mp.nominal;
        s = step_robot(s, mp.command.v, mp.command.omega, cfg.mppi.dt, cfg.mppi.limits);
        result.trajectory.push_back(s);

        if (check_collision(scene, s) == Contact::RigidCollision) {
            result.outcome = Outcome::Collided;
            break;
        }
        if ((s.position() - scene.goal).norm() < cfg.r_goal) {
            result.outcome = Outcome::Reached;
            result.time_to_goal = s.t;
            break;
        }
        const auto freeze = detect_freeze(result.trajectory, scene.goal, cfg.r_goal,
                                          cfg.freeze_window, cfg.freeze_eps);
        if (freeze.frozen) {
            result.outcome = Outcome::Frozen;
            result.freeze_time = freeze.first_time;
            break;
        }
    }

    result.fused = std::move(fused);
    return result;
}

}  // namespace splatnav
