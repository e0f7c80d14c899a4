// Copyright 2026 splatnav contributors
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "splatnav/esdf/esdf.hpp"
#include "splatnav/worldsim/world.hpp"

namespace splatnav {

struct MppiParams {
    int rollouts = 256;  // K
    int horizon = 30;    // H
    double dt = 0.1;
    double sigma_v = 0.3;
    double sigma_omega = 0.5;
    double lambda = 1.0;
    double w_obs = 100.0;
    double w_goal = 1.0;
    double w_ctrl = 0.1;
    double d_safe = 0.5;
    double d_outside = 5.0;  // ESDF value assumed outside the grid
    RobotLimits limits;

    void validate() const;
};

struct Control {
    double v = 0.0;
    double omega = 0.0;
};

struct WaypointPlan {
    std::vector<Eigen::Vector2d> waypoints;
    double spacing = 25.0;
};

/// Straight-line waypoint decomposition: points every `spacing` meters of arc
/// length from start toward goal, ending exactly at the goal.
WaypointPlan make_waypoints(const Eigen::Vector2d& start, const Eigen::Vector2d& goal,
                            double spacing = 25.0);

/// MPPI stage cost over one rollout. States 1..H pay the obstacle, goal and
/// hard-penalty terms (d <= 0 triggers the penalty, boundary inclusive);
/// controls pay the effort term. Distances come from bilinear ESDF sampling
/// with out-of-grid reads at d_outside.
double rollout_cost(const std::vector<RobotState>& traj, const EsdfGrid2D& esdf,
                    const Eigen::Vector2d& waypoint, const std::vector<Control>& controls,
                    const MppiParams& p);

/// Softmax weights exp(-(cost - min) / lambda), normalized to sum 1.
std::vector<double> mppi_weights(const std::vector<double>& costs, double lambda);

struct MppiStepResult {
    Control command;
    std::vector<Control> nominal;  // shifted, ready for the next step
};

/// One MPPI update: perturb the nominal sequence with white Gaussian noise,
/// roll out with step_robot, reweight, emit the first control of the averaged
/// sequence. Deterministic given the seed.
MppiStepResult mppi_step(const RobotState& s, const EsdfGrid2D& esdf,
                         const Eigen::Vector2d& waypoint, const std::vector<Control>& nominal,
                         const MppiParams& p, std::uint64_t seed);

}  // namespace splatnav
