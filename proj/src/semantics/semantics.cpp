// Copyright 2026 splatnav contributors
// Licensed under the Apache License, Version 2.0.

#include "splatnav/semantics/semantics.hpp"

#include <cmath>

namespace splatnav {

std::string to_string(TerrainClass c) {
    switch (c) {
        case TerrainClass::Stable: return "Stable";
        case TerrainClass::Granular: return "Granular";
        case TerrainClass::Rocky: return "Rocky";
        case TerrainClass::VegetationHighResistance: return "VegetationHighResistance";
        case TerrainClass::RigidObstacle: return "RigidObstacle";
        case TerrainClass::Unknown: return "Unknown";
    }
    return "Unknown";
}

TerrainClass terrain_class_from_string(const std::string& s) {
    if (s == "Stable") return TerrainClass::Stable;
    if (s == "Granular") return TerrainClass::Granular;
    if (s == "Rocky") return TerrainClass::Rocky;
    if (s == "VegetationHighResistance") return TerrainClass::VegetationHighResistance;
    if (s == "RigidObstacle") return TerrainClass::RigidObstacle;
    if (s == "Unknown") return TerrainClass::Unknown;
    throw ConfigError("unknown terrain class: " + s);
}

void CostModel::validate() const {
    for (double c : cost) {
        if (!(c >= 0.0 && c <= 1.0)) throw ConfigError("terrain cost outside [0,1]");
    }
    const double s = cost_of(TerrainClass::Stable);
    const double g = cost_of(TerrainClass::Granular);
    const double r = cost_of(TerrainClass::Rocky);
    const double v = cost_of(TerrainClass::VegetationHighResistance);
    const double o = cost_of(TerrainClass::RigidObstacle);
    if (!(s < g && g < r && r < v && v < o)) {
        throw ConfigError("terrain costs must increase strictly across classes");
    }
    if (o != 1.0) throw ConfigError("cost(RigidObstacle) must be 1.0");
}

CostImage CostImage::filled(int w, int h, double value, TerrainClass cls) {
    CostImage img;
    img.width = w;
    img.height = h;
    img.values.assign(static_cast<std::size_t>(w) * h, value);
    img.class_ids.assign(static_cast<std::size_t>(w) * h, cls);
    return img;
}

CostImage segment(const ClassImage& classes, const CostModel& model) {
    if (classes.width < 1 || classes.height < 1 ||
        classes.ids.size() != static_cast<std::size_t>(classes.width) * classes.height) {
        throw ConfigError("segment: empty or inconsistent class image");
    }
    CostImage out;
    out.width = classes.width;
    out.height = classes.height;
    out.class_ids = classes.ids;
    out.values.resize(classes.ids.size());
    for (std::size_t i = 0; i < classes.ids.size(); ++i) {
        out.values[i] = model.cost_of(classes.ids[i]);
    }
    return out;
}

std::vector<LabeledPoint> associate_costs(const std::vector<Eigen::Vector3d>& points,
                                          const Pose3& T_lidar_to_cam,
                                          const CameraModel& cam, const CostImage& costmap) {
    if (costmap.width != cam.width || costmap.height != cam.height) {
        throw DimensionMismatch("associate_costs: costmap does not match camera size");
    }
    std::vector<LabeledPoint> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        const Eigen::Vector3d p_cam = T_lidar_to_cam.apply(p);
        const auto px = pinhole_project(cam, p_cam);
        if (!px) continue;
        // nearest pixel; class labels are categorical so no interpolation
        const int u = static_cast<int>(std::lround(px->x()));
        const int v = static_cast<int>(std::lround(px->y()));
        if (u < 0 || u >= cam.width || v < 0 || v >= cam.height) continue;
        LabeledPoint lp;
        lp.p_lidar = p;
        lp.p_cam = p_cam;
        lp.cost = costmap.at(u, v);
        lp.cls = costmap.class_ids[costmap.idx(u, v)];
        out.push_back(lp);
    }
    return out;
}

}  // namespace splatnav
