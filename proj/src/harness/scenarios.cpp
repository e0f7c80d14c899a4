// Copyright 2026 splatnav contributors
// Licensed under the Apache License, Version 2.0.

#include <cmath>

#include "splatnav/harness/scene_io.hpp"

namespace splatnav {
namespace {

Obstacle rigid_box(double cx, double cy, double hx, double hy, double height,
                   double yaw = 0.0) {
    Obstacle ob;
    ob.shape = BoxShape{{cx, cy}, {hx, hy}, yaw, height};
    ob.cls = TerrainClass::RigidObstacle;
    ob.pliable = false;
    return ob;
}

Obstacle tree(double cx, double cy, double radius = 0.25, double height = 3.0) {
    Obstacle ob;
    ob.shape = CylinderShape{{cx, cy}, radius, height};
    ob.cls = TerrainClass::RigidObstacle;
    ob.pliable = false;
    return ob;
}

Obstacle bush(double cx, double cy, double hx, double hy, double height = 0.5) {
    Obstacle ob;
    ob.shape = BoxShape{{cx, cy}, {hx, hy}, 0.0, height};
    ob.cls = TerrainClass::VegetationHighResistance;
    ob.pliable = true;
    return ob;
}

Obstacle grass_tuft(double cx, double cy, double radius = 0.22, double height = 0.45) {
    Obstacle ob;
    ob.shape = CylinderShape{{cx, cy}, radius, height};
    ob.cls = TerrainClass::VegetationHighResistance;
    ob.pliable = true;
    return ob;
}

// Staggered tuft lattice over [x0,x1] x [y0,y1].
void fill_grass(Scene& scene, double x0, double x1, double y0, double y1,
                double spacing = 0.8) {
    int row = 0;
    for (double y = y0; y <= y1 + 1e-9; y += spacing, ++row) {
        const double off = (row % 2 == 0) ? 0.0 : 0.5 * spacing;
        for (double x = x0 + off; x <= x1 + 1e-9; x += spacing) {
            scene.obstacles.push_back(grass_tuft(x, y));
        }
    }
}

void common_tuning(PipelineConfig& cfg) {
    cfg.spawn.alpha0 = 0.9;
    cfg.spawn.delta_theta = cfg.lidar.delta_theta();
    cfg.mppi.d_outside = cfg.esdf.lidar_truncation;
}

}  // namespace

bool is_builtin_scenario(const std::string& name) {
    return name == "corridor_bushes" || name == "grass_field" || name == "long_range" ||
           name == "depth_gauntlet";
}

SceneFile make_scenario(const std::string& name) {
    SceneFile out;
    Scene& s = out.scene;
    PipelineConfig& cfg = out.config;
    common_tuning(cfg);

    if (name == "corridor_bushes") {
        // rigid walls with a pliable-flanked narrow gap and a tree by the
        // approach; only the semantic pipeline drives through the bushes
        s.bounds_min = {-3.0, -9.0};
        s.bounds_max = {19.0, 9.0};
        s.start = {0.0, 0.0};
        s.goal = {12.0, 0.0};
        s.obstacles.push_back(rigid_box(6.0, -5.0, 0.4, 4.0, 1.5));
        s.obstacles.push_back(rigid_box(6.0, 5.0, 0.4, 4.0, 1.5));
        s.obstacles.push_back(bush(6.0, -0.5, 0.55, 0.6));
        s.obstacles.push_back(bush(6.0, 0.5, 0.55, 0.6));
        s.obstacles.push_back(tree(4.2, 1.6));
        cfg.max_time = 60.0;
    } else if (name == "grass_field") {
        // a wide pliable field with embedded rigid trees; geometric planners
        // treat the grass as a wall
        s.bounds_min = {-3.0, -10.0};
        s.bounds_max = {21.0, 10.0};
        s.start = {0.0, 0.0};
        s.goal = {14.0, 0.0};
        fill_grass(s, 4.0, 10.0, -9.0, 9.0);
        s.obstacles.push_back(tree(6.0, 0.9, 0.28));
        s.obstacles.push_back(tree(8.0, -1.1, 0.28));
        s.obstacles.push_back(tree(9.2, 1.4, 0.28));
        cfg.max_time = 80.0;
    } else if (name == "depth_gauntlet") {
        // walled grass corridor with trees near the centerline, run fast
        // enough that a shallow front region goes blind between map updates
        s.bounds_min = {-3.0, -6.0};
        s.bounds_max = {21.0, 6.0};
        s.start = {0.0, 0.0};
        s.goal = {16.0, 0.0};
        s.obstacles.push_back(rigid_box(7.5, -4.4, 10.0, 0.4, 1.5));
        s.obstacles.push_back(rigid_box(7.5, 4.4, 10.0, 0.4, 1.5));
        fill_grass(s, 3.0, 13.0, -3.6, 3.6);
        s.obstacles.push_back(tree(6.0, 0.25));
        s.obstacles.push_back(tree(9.5, -0.3));
        s.obstacles.push_back(tree(12.0, 0.35));
        cfg.mppi.limits.v_max = 1.5;
        cfg.max_time = 60.0;
    } else if (name == "long_range") {
        // 100 m course: pavement, lawn, then a vine patch with trees
        s.bounds_min = {-5.0, -14.0};
        s.bounds_max = {106.0, 14.0};
        s.start = {0.0, 0.0};
        s.goal = {100.0, 0.0};
        s.default_ground = TerrainClass::Stable;
        TerrainPatch lawn;
        lawn.polygon = {{30.0, -14.0}, {70.0, -14.0}, {70.0, 14.0}, {30.0, 14.0}};
        lawn.cls = TerrainClass::Granular;
        s.patches.push_back(lawn);
        TerrainPatch rocky;
        rocky.polygon = {{20.0, -14.0}, {30.0, -14.0}, {30.0, 14.0}, {20.0, 14.0}};
        rocky.cls = TerrainClass::Rocky;
        s.patches.push_back(rocky);
        s.obstacles.push_back(tree(15.0, 2.0));
        s.obstacles.push_back(bush(40.0, -1.8, 1.0, 1.0));
        s.obstacles.push_back(tree(55.0, 1.5));
        fill_grass(s, 70.0, 88.0, -10.0, 10.0, 0.9);
        s.obstacles.push_back(tree(76.0, 0.8, 0.3));
        s.obstacles.push_back(tree(83.0, -1.0, 0.3));
        cfg.max_time = 300.0;
    } else {
        throw ConfigError("unknown scenario: " + name);
    }

    s.validate();
    cfg.validate();
    return out;
}

}  // namespace splatnav
