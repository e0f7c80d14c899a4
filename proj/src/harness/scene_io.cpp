// Copyright 2026 splatnav contributors
// Licensed under the Apache License, Version 2.0.

#include "splatnav/harness/scene_io.hpp"

#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "splatnav/core/errors.hpp"

namespace splatnav {
namespace {

using nlohmann::json;

Eigen::Vector2d vec2(const json& j) {
    if (!j.is_array() || j.size() < 2) throw ConfigError("expected [x, y] array");
    return {j[0].get<double>(), j[1].get<double>()};
}

Obstacle parse_obstacle(const json& j) {
    Obstacle ob;
    const std::string shape = j.at("shape").get<std::string>();
    const json& p = j.at("params");
    if (shape == "cylinder") {
        CylinderShape c;
        c.center = vec2(p.at("center"));
        c.radius = p.at("radius").get<double>();
        c.height = p.at("height").get<double>();
        ob.shape = c;
    } else if (shape == "box") {
        BoxShape b;
        b.center = vec2(p.at("center"));
        b.half_extents = vec2(p.at("half_extents"));
        b.yaw = p.value("yaw", 0.0);
        b.height = p.at("height").get<double>();
        ob.shape = b;
    } else {
        throw ConfigError("unknown obstacle shape: " + shape);
    }
    ob.cls = terrain_class_from_string(j.at("class").get<std::string>());
    ob.pliable = j.value("pliable", false);
    return ob;
}

json dump_obstacle(const Obstacle& ob) {
    json j;
    if (std::holds_alternative<CylinderShape>(ob.shape)) {
        const auto& c = std::get<CylinderShape>(ob.shape);
        j["shape"] = "cylinder";
        j["params"] = {{"center", {c.center.x(), c.center.y()}},
                       {"radius", c.radius},
                       {"height", c.height}};
    } else {
        const auto& b = std::get<BoxShape>(ob.shape);
        j["shape"] = "box";
        j["params"] = {{"center", {b.center.x(), b.center.y()}},
                       {"half_extents", {b.half_extents.x(), b.half_extents.y()}},
                       {"yaw", b.yaw},
                       {"height", b.height}};
    }
    j["class"] = to_string(ob.cls);
    j["pliable"] = ob.pliable;
    return j;
}

Scene parse_scene(const json& j) {
    Scene s;
    const json& b = j.at("bounds");
    if (!b.is_array() || b.size() != 4) throw ConfigError("bounds must be [x0,y0,x1,y1]");
    s.bounds_min = {b[0].get<double>(), b[1].get<double>()};
    s.bounds_max = {b[2].get<double>(), b[3].get<double>()};
    s.default_ground = terrain_class_from_string(j.at("default_ground").get<std::string>());

    for (const auto& ob : j.value("obstacles", json::array())) {
        s.obstacles.push_back(parse_obstacle(ob));
    }
    for (const auto& pj : j.value("patches", json::array())) {
        TerrainPatch patch;
        for (const auto& v : pj.at("polygon")) patch.polygon.push_back(vec2(v));
        patch.cls = terrain_class_from_string(pj.at("class").get<std::string>());
        s.patches.push_back(patch);
    }

    const json& st = j.at("start");
    s.start = vec2(st);
    s.start_heading = st.is_array() && st.size() > 2 ? st[2].get<double>() : 0.0;
    s.goal = vec2(j.at("goal"));
    s.validate();
    return s;
}

template <typename T>
void maybe(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

void apply_config(const json& c, PipelineConfig& cfg) {
    if (c.contains("costs")) {
        for (const auto& [key, value] : c.at("costs").items()) {
            cfg.costs.cost[static_cast<std::size_t>(terrain_class_from_string(key))] =
                value.get<double>();
        }
    }
    if (c.contains("camera")) {
        const json& j = c.at("camera");
        maybe(j, "fx", cfg.camera.fx);
        maybe(j, "fy", cfg.camera.fy);
        maybe(j, "cx", cfg.camera.cx);
        maybe(j, "cy", cfg.camera.cy);
        maybe(j, "width", cfg.camera.width);
        maybe(j, "height", cfg.camera.height);
        maybe(j, "z_near", cfg.camera.z_near);
    }
    if (c.contains("cam_mount")) {
        const json& j = c.at("cam_mount");
        maybe(j, "height", cfg.cam_mount.height);
        maybe(j, "pitch_deg", cfg.cam_mount.pitch_deg);
    }
    if (c.contains("lidar")) {
        const json& j = c.at("lidar");
        maybe(j, "channels", cfg.lidar.channels);
        maybe(j, "vertical_fov_deg", cfg.lidar.vertical_fov_deg);
        maybe(j, "azimuth_steps", cfg.lidar.azimuth_steps);
        maybe(j, "max_range", cfg.lidar.max_range);
        maybe(j, "sigma_r", cfg.lidar.sigma_r);
        maybe(j, "height", cfg.lidar_height);
    }
    if (c.contains("spawn")) {
        const json& j = c.at("spawn");
        maybe(j, "s_min", cfg.spawn.s_min);
        maybe(j, "s_max", cfg.spawn.s_max);
        maybe(j, "r_dup", cfg.spawn.r_dup);
        maybe(j, "alpha0", cfg.spawn.alpha0);
    }
    if (c.contains("splat")) {
        const json& j = c.at("splat");
        maybe(j, "budget", cfg.budget);
        maybe(j, "budget_margin_deg", cfg.budget_margin_deg);
        maybe(j, "optimize_steps", cfg.optimize_steps);
        maybe(j, "lr_mu", cfg.rates.mu);
        maybe(j, "lr_opacity", cfg.rates.opacity);
        maybe(j, "lr_cost", cfg.rates.cost);
    }
    if (c.contains("volume")) {
        const json& j = c.at("volume");
        if (j.contains("mode")) {
            const std::string m = j.at("mode").get<std::string>();
            if (m == "analytic") cfg.volume_mode = VolumeMode::Analytic;
            else if (m == "sampled") cfg.volume_mode = VolumeMode::SampledPoints;
            else if (m == "means") cfg.volume_mode = VolumeMode::MeansOnly;
            else throw ConfigError("unknown volume mode: " + m);
        }
        maybe(j, "fraction", cfg.volume_fraction);
        maybe(j, "n_pts", cfg.volume_n_pts);
        maybe(j, "z0", cfg.volume_z0);
        maybe(j, "layers", cfg.volume_layers);
    }
    if (c.contains("map")) {
        const json& j = c.at("map");
        maybe(j, "resolution", cfg.map_resolution);
        maybe(j, "cells", cfg.map_cells);
    }
    if (c.contains("esdf")) {
        const json& j = c.at("esdf");
        maybe(j, "d_max", cfg.esdf.d_max);
        maybe(j, "lidar_truncation", cfg.esdf.lidar_truncation);
        maybe(j, "z_min", cfg.esdf.z_min);
        maybe(j, "z_max", cfg.esdf.z_max);
        maybe(j, "inflate_r", cfg.inflate_r);
        maybe(j, "inflate_sigma", cfg.inflate_sigma);
    }
    if (c.contains("front")) {
        const json& j = c.at("front");
        maybe(j, "depth", cfg.front.depth);
        maybe(j, "width", cfg.front.width);
    }
    if (c.contains("mppi")) {
        const json& j = c.at("mppi");
        maybe(j, "rollouts", cfg.mppi.rollouts);
        maybe(j, "horizon", cfg.mppi.horizon);
        maybe(j, "dt", cfg.mppi.dt);
        maybe(j, "sigma_v", cfg.mppi.sigma_v);
        maybe(j, "sigma_omega", cfg.mppi.sigma_omega);
        maybe(j, "lambda", cfg.mppi.lambda);
        maybe(j, "w_obs", cfg.mppi.w_obs);
        maybe(j, "w_goal", cfg.mppi.w_goal);
        maybe(j, "w_ctrl", cfg.mppi.w_ctrl);
        maybe(j, "d_safe", cfg.mppi.d_safe);
    }
    if (c.contains("nav")) {
        const json& j = c.at("nav");
        maybe(j, "r_wp", cfg.r_wp);
        maybe(j, "r_goal", cfg.r_goal);
        maybe(j, "max_time", cfg.max_time);
        maybe(j, "control_per_map", cfg.control_per_map);
        maybe(j, "waypoint_spacing", cfg.waypoint_spacing);
        maybe(j, "v_max", cfg.mppi.limits.v_max);
        maybe(j, "omega_max", cfg.mppi.limits.omega_max);
        maybe(j, "freeze_window", cfg.freeze_window);
        maybe(j, "freeze_eps", cfg.freeze_eps);
    }
    // the planner's out-of-grid read and the spawn angular step follow config
    cfg.mppi.d_outside = cfg.esdf.lidar_truncation;
    cfg.spawn.delta_theta = cfg.lidar.delta_theta();
}

}  // namespace

SceneFile load_scene_file(const std::string& path_or_builtin) {
    if (!std::filesystem::exists(path_or_builtin)) {
        if (is_builtin_scenario(path_or_builtin)) return make_scenario(path_or_builtin);
        throw IoError("scene file not found: " + path_or_builtin);
    }
    std::ifstream is(path_or_builtin);
    if (!is) throw IoError("cannot open " + path_or_builtin);
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scene json parse error: ") + e.what());
    }
    try {
        SceneFile out;
        out.scene = parse_scene(j);
        if (j.contains("config")) apply_config(j.at("config"), out.config);
        else apply_config(json::object(), out.config);
        out.config.validate();
        return out;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scene schema error: ") + e.what());
    }
}

void save_scene_json(const Scene& scene, const std::string& path) {
    json j;
    j["bounds"] = {scene.bounds_min.x(), scene.bounds_min.y(), scene.bounds_max.x(),
                   scene.bounds_max.y()};
    j["default_ground"] = to_string(scene.default_ground);
    j["obstacles"] = json::array();
    for (const auto& ob : scene.obstacles) j["obstacles"].push_back(dump_obstacle(ob));
    j["patches"] = json::array();
    for (const auto& patch : scene.patches) {
        json pj;
        pj["polygon"] = json::array();
        for (const auto& v : patch.polygon) pj["polygon"].push_back({v.x(), v.y()});
        pj["class"] = to_string(patch.cls);
        j["patches"].push_back(pj);
    }
    j["start"] = {scene.start.x(), scene.start.y(), scene.start_heading};
    j["goal"] = {scene.goal.x(), scene.goal.y()};

    std::ofstream os(path);
    if (!os) throw IoError("cannot write " + path);
    os << j.dump(2) << "\n";
}

}  // namespace splatnav
