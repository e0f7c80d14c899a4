// Copyright 2026 splatnav contributors
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <string>

#include "splatnav/planner/navigate.hpp"
#include "splatnav/worldsim/world.hpp"

namespace splatnav {

/// A scene plus the pipeline configuration after applying the file's
/// "config" overrides on top of the library defaults.
struct SceneFile {
    Scene scene;
    PipelineConfig config;
};

/// Loads a scene file (JSON). Resolves built-in scenario names
/// (corridor_bushes, grass_field, long_range, depth_gauntlet) when the
/// argument is not an existing file.
SceneFile load_scene_file(const std::string& path_or_builtin);

/// Serializes a scene (without config overrides) to JSON.
void save_scene_json(const Scene& scene, const std::string& path);

bool is_builtin_scenario(const std::string& name);

/// Built-in desk-scale scenarios.
SceneFile make_scenario(const std::string& name);

}  // namespace splatnav
