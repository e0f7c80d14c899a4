// Copyright 2026 splatnav contributors
// Licensed under the Apache License, Version 2.0.
//
// splatnav command line: scenario simulation, map dumps, batch evaluation,
// ablation sweeps and field re-rendering.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "splatnav/harness/runner.hpp"
#include "splatnav/harness/scene_io.hpp"
#include "splatnav/splat/render.hpp"

namespace {

using namespace splatnav;

RobotState pose_from_string(const std::string& text) {
    RobotState s;
    double x = 0, y = 0, th = 0;
    if (std::sscanf(text.c_str(), "%lf,%lf,%lf", &x, &y, &th) < 2) {
        throw ConfigError("--pose expects x,y[,theta]");
    }
    s.x = x;
    s.y = y;
    s.heading = th;
    return s;
}

std::vector<Method> parse_methods(const std::string& text) {
    if (text == "all") {
        return {Method::SplatbloxAllPoints, Method::SplatbloxMeansOnly, Method::GeometricOnly};
    }
    std::vector<Method> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(method_from_string(item));
    if (out.empty()) throw ConfigError("--methods is empty");
    return out;
}

std::string scenario_id_of(const std::string& scene_arg) {
    if (is_builtin_scenario(scene_arg)) return scene_arg;
    return std::filesystem::path(scene_arg).stem().string();
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot write " + path);
    os << "t,x,y,heading,v,omega\n";
    char buf[160];
    for (const auto& s : traj) {
        std::snprintf(buf, sizeof(buf), "%.4f,%.6f,%.6f,%.6f,%.6f,%.6f\n", s.t, s.x, s.y,
                      s.heading, s.v, s.omega);
        os << buf;
    }
}

void write_cost_image_pfm(const CostImage& img, const std::string& path) {
    EsdfGrid2D grid;
    grid.spec = Grid2Spec{1.0, {0.0, 0.0}, img.width, img.height};
    grid.d = img.values;
    write_pfm(grid, path, 1.0);
}

int cmd_simulate(const std::string& scene_arg, const std::string& method_str, int seed,
                 const std::string& out_dir) {
    const SceneFile sf = load_scene_file(scene_arg);
    const Method method = method_from_string(method_str);
    std::filesystem::create_directories(out_dir);

    const PipelineConfig cfg = config_for_method(sf.config, method);
    const NavigationResult nav = navigate(sf.scene, cfg, static_cast<std::uint64_t>(seed));

    RunRecord rec = run_once(sf.scene, sf.config, method, scenario_id_of(scene_arg), seed);
    {
        std::ofstream os(out_dir + "/record.csv");
        if (!os) throw IoError("cannot write record.csv");
        write_records_csv({rec}, os);
    }
    write_trajectory_csv(nav.trajectory, out_dir + "/trajectory.csv");
    {
        std::ofstream os(out_dir + "/field.splat");
        if (!os) throw IoError("cannot write field.splat");
        dump_field(nav.field, os);
    }
    if (!nav.fused.d.empty()) write_pfm(nav.fused, out_dir + "/fused.pfm", cfg.esdf.d_max);

    std::cout << scenario_id_of(scene_arg) << " " << to_string(method) << " seed " << seed
              << ": " << to_string(nav.outcome) << ", path " << rec.path_length << " m";
    if (rec.trg_s) std::cout << ", trg " << *rec.trg_s << " s";
    std::cout << "\n";
    return 0;
}

int cmd_map(const std::string& scene_arg, const std::string& pose_str,
            const std::string& out_dir, int ticks) {
    const SceneFile sf = load_scene_file(scene_arg);
    const RobotState s = pose_from_string(pose_str);
    std::filesystem::create_directories(out_dir);

    SplatField field;
    field.budget = sf.config.budget;
    MapTick tick;
    for (int i = 0; i < std::max(1, ticks); ++i) {
        field.frame_counter = i;
        tick = run_map_tick(sf.scene, s, field, sf.config, 1000 + i);
    }

    {
        std::ofstream os(out_dir + "/field.splat");
        if (!os) throw IoError("cannot write field.splat");
        dump_field(field, os);
    }
    write_pfm(tick.gsplat, out_dir + "/gsplat.pfm", sf.config.esdf.d_max);
    write_pfm(tick.lidar, out_dir + "/lidar.pfm", sf.config.esdf.lidar_truncation);
    write_pfm(tick.fused, out_dir + "/fused.pfm", sf.config.esdf.d_max);
    std::cout << "map: " << field.primitives.size() << " primitives, grids "
              << tick.fused.spec.nx << "x" << tick.fused.spec.ny << " @ "
              << tick.fused.spec.resolution << " m\n";
    return 0;
}

int cmd_eval(const std::string& scene_arg, const std::string& methods_str, int seeds,
             const std::string& out_path) {
    const SceneFile sf = load_scene_file(scene_arg);
    const auto methods = parse_methods(methods_str);
    const auto records =
        run_eval(sf.scene, sf.config, methods, seeds, scenario_id_of(scene_arg));
    std::ofstream os(out_path);
    if (!os) throw IoError("cannot write " + out_path);
    write_records_csv(records, os);

    for (Method m : methods) {
        std::vector<RunRecord> subset;
        for (const auto& r : records) {
            if (r.method == m) subset.push_back(r);
        }
        const auto summary = compute_metrics(subset);
        std::cout << to_string(m) << ": SR " << summary.sr_pct << "%, FR " << summary.fr_pct
                  << "%";
        if (summary.ntl_mean) std::cout << ", NTL " << *summary.ntl_mean;
        if (summary.trg_mean_s) std::cout << ", TRG " << *summary.trg_mean_s << " s";
        std::cout << "\n";
    }
    return 0;
}

int cmd_ablate(const std::string& axis, const std::string& scene_arg, int seeds,
               const std::string& out_path) {
    const SceneFile sf = load_scene_file(scene_arg);
    std::vector<AblationRow> rows;
    std::string key;
    if (axis == "density") {
        rows = run_ablation_density(sf.scene, sf.config, {0.25, 0.5, 1.0}, seeds,
                                    scenario_id_of(scene_arg));
        key = "density";
    } else if (axis == "depth") {
        rows = run_ablation_depth(sf.scene, sf.config, {1.0, 2.0, 3.0}, seeds,
                                  scenario_id_of(scene_arg));
        key = "depth_m";
    } else {
        throw ConfigError("ablate: axis must be density or depth");
    }
    std::ofstream os(out_path);
    if (!os) throw IoError("cannot write " + out_path);
    write_ablation_csv(rows, key, os);
    for (const auto& r : rows) std::cout << key << " " << r.label << ": SR " << r.sr_pct << "%\n";
    return 0;
}

int cmd_render(const std::string& field_path, const std::string& pose_str,
               const std::string& out_path) {
    std::ifstream is(field_path);
    if (!is) throw IoError("cannot open " + field_path);
    const SplatField field = load_field(is);

    const RobotState s = pose_from_string(pose_str);
    const PipelineConfig cfg;
    const Pose3 world_to_cam = camera_pose_world(s, cfg.cam_mount).inverse();
    const CostImage img = render_cost_map(field, world_to_cam, cfg.camera, cfg.c_bg());
    write_cost_image_pfm(img, out_path);
    std::cout << "rendered " << img.width << "x" << img.height << " cost map from "
              << field.primitives.size() << " primitives\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"traversability-aware gaussian splat navigation"};
    app.require_subcommand(1);

    std::string scene, out, pose = "0,0,0", methods = "all", field_path, axis;
    int seed = 0, seeds = 10, ticks = 3;

    auto* simulate = app.add_subcommand("simulate", "run one closed-loop navigation episode");
    simulate->add_option("scene", scene, "scene file or builtin name")->required();
    simulate->add_option("--method", methods, "method name")->default_val("SplatbloxAllPoints");
    simulate->add_option("--seed", seed, "run seed");
    simulate->add_option("--out", out, "output directory")->required();

    auto* map = app.add_subcommand("map", "build and dump the map at a fixed pose");
    map->add_option("scene", scene, "scene file or builtin name")->required();
    map->add_option("--pose", pose, "robot pose x,y,theta")->required();
    map->add_option("--ticks", ticks, "mapping ticks to run");
    map->add_option("--out", out, "output directory")->required();

    auto* eval = app.add_subcommand("eval", "batch runs over methods and seeds");
    eval->add_option("scene", scene, "scene file or builtin name")->required();
    eval->add_option("--methods", methods, "'all' or comma list");
    eval->add_option("--seeds", seeds, "number of seeds");
    eval->add_option("--out", out, "results csv path")->required();

    auto* ablate = app.add_subcommand("ablate", "density/depth ablation sweeps");
    ablate->add_option("axis", axis, "density or depth")->required();
    ablate->add_option("scene", scene, "scene file or builtin name")->required();
    ablate->add_option("--seeds", seeds, "number of seeds");
    ablate->add_option("--out", out, "csv path")->required();

    auto* render = app.add_subcommand("render", "render a cost map from a field dump");
    render->add_option("field", field_path, "SPLATFIELD dump path")->required();
    render->add_option("--pose", pose, "robot pose x,y,theta")->required();
    render->add_option("--out", out, "output pfm path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return cmd_simulate(scene, methods == "all" ? "SplatbloxAllPoints" : methods, seed, out);
        if (map->parsed()) return cmd_map(scene, pose, out, ticks);
        if (eval->parsed()) return cmd_eval(scene, methods, seeds, out);
        if (ablate->parsed()) return cmd_ablate(axis, scene, seeds, out);
        if (render->parsed()) return cmd_render(field_path, pose, out);
    } catch (const splatnav::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const splatnav::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
