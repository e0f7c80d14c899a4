// Copyright 2026 splatnav contributors
// Licensed under the Apache License, Version 2.0.

#include "splatnav/planner/mppi.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "splatnav/core/errors.hpp"

namespace splatnav {

void MppiParams::validate() const {
    if (rollouts < 1 || horizon < 1 || lambda <= 0.0 || sigma_v <= 0.0 ||
        sigma_omega <= 0.0 || dt <= 0.0) {
        throw ConfigError("mppi: invalid parameters");
    }
}

WaypointPlan make_waypoints(const Eigen::Vector2d& start, const Eigen::Vector2d& goal,
                            double spacing) {
    if (spacing <= 0.0) throw ConfigError("make_waypoints: spacing must be positive");
    WaypointPlan plan;
    plan.spacing = spacing;
    const double dist = (goal - start).norm();
    if (dist > spacing) {
        const Eigen::Vector2d dir = (goal - start) / dist;
        for (double s = spacing; s < dist - 1e-9; s += spacing) {
            plan.waypoints.push_back(start + s * dir);
        }
    }
    plan.waypoints.push_back(goal);
    return plan;
}

double rollout_cost(const std::vector<RobotState>& traj, const EsdfGrid2D& esdf,
                    const Eigen::Vector2d& waypoint, const std::vector<Control>& controls,
                    const MppiParams& p) {
    if (traj.size() != static_cast<std::size_t>(p.horizon) + 1 ||
        controls.size() != static_cast<std::size_t>(p.horizon)) {
        throw ConfigError("rollout_cost: trajectory must have horizon+1 states");
    }
    double total = 0.0;
    for (int t = 0; t < p.horizon; ++t) {
        const RobotState& s = traj[t + 1];
        const double d = sample_esdf(esdf, s.position(), p.d_outside);
        const double gap = std::max(0.0, p.d_safe - d);
        total += p.w_obs * gap * gap;
        if (d <= 0.0) total += 1e6;
        total += p.w_goal * (s.position() - waypoint).norm();
        total += p.w_ctrl * (controls[t].v * controls[t].v +
                             controls[t].omega * controls[t].omega);
    }
    return total;
}

std::vector<double> mppi_weights(const std::vector<double>& costs, double lambda) {
    const double lo = *std::min_element(costs.begin(), costs.end());
    std::vector<double> w(costs.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < costs.size(); ++i) {
        w[i] = std::exp(-(costs[i] - lo) / lambda);
        sum += w[i];
    }
    for (auto& x : w) x /= sum;
    return w;
}

MppiStepResult mppi_step(const RobotState& s, const EsdfGrid2D& esdf,
                         const Eigen::Vector2d& waypoint, const std::vector<Control>& nominal,
                         const MppiParams& p, std::uint64_t seed) {
    p.validate();
    if (nominal.size() != static_cast<std::size_t>(p.horizon)) {
        throw ConfigError("mppi_step: nominal length must equal the horizon");
    }

    const int kk = p.rollouts, hh = p.horizon;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    std::vector<Control> eps(static_cast<std::size_t>(kk) * hh);
    for (auto& e : eps) {
        e.v = p.sigma_v * normal(rng);
        e.omega = p.sigma_omega * normal(rng);
    }

    std::vector<double> costs(kk);
    std::vector<RobotState> traj(hh + 1);
    std::vector<Control> executed(hh);
    for (int k = 0; k < kk; ++k) {
        traj[0] = s;
        for (int t = 0; t < hh; ++t) {
            const Control& e = eps[static_cast<std::size_t>(k) * hh + t];
            traj[t + 1] =
                step_robot(traj[t], nominal[t].v + e.v, nominal[t].omega + e.omega, p.dt,
                           p.limits);
            executed[t] = {traj[t + 1].v, traj[t + 1].omega};
        }
        costs[k] = rollout_cost(traj, esdf, waypoint, executed, p);
    }

    const std::vector<double> w = mppi_weights(costs, p.lambda);
    std::vector<Control> updated(hh);
    for (int t = 0; t < hh; ++t) {
        double v = 0.0, om = 0.0;
        for (int k = 0; k < kk; ++k) {
            const Control& e = eps[static_cast<std::size_t>(k) * hh + t];
            v += w[k] * (nominal[t].v + e.v);
            om += w[k] * (nominal[t].omega + e.omega);
        }
        updated[t] = {v, om};
    }

    MppiStepResult out;
    out.command = updated[0];
    out.nominal.assign(updated.begin() + 1, updated.end());
    out.nominal.push_back(updated.back());
    return out;
}

}  // namespace splatnav
