// Copyright 2026 splatnav contributors
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "splatnav/worldsim/world.hpp"

namespace splatnav {

enum class Outcome { Reached, Frozen, Collided, Timeout };
enum class Method { SplatbloxAllPoints, SplatbloxMeansOnly, GeometricOnly };

std::string to_string(Outcome o);
std::string to_string(Method m);
Outcome outcome_from_string(const std::string& s);
Method method_from_string(const std::string& s);

using Trajectory = std::vector<RobotState>;

struct RunRecord {
    std::string scenario_id;
    Method method = Method::SplatbloxAllPoints;
    int seed = 0;
    Outcome outcome = Outcome::Timeout;
    bool frozen = false;
    double path_length = 0.0;
    double straight_line = 0.0;
    std::optional<double> ntl;    // Reached runs only
    std::optional<double> trg_s;  // Reached runs only
};

struct MetricsSummary {
    double sr_pct = 0.0;
    double fr_pct = 0.0;
    std::optional<double> ntl_mean;
    std::optional<double> trg_mean_s;
};

struct FreezeCheck {
    bool frozen = false;
    double first_time = 0.0;
};

/// True when some sliding window of `window` seconds has net displacement
/// below eps_net while the goal is still more than r_goal away. Oscillation
/// accrues path length but no net displacement, so this covers both the stuck
/// and the oscillating case.
FreezeCheck detect_freeze(const Trajectory& traj, const Eigen::Vector2d& goal,
                          double r_goal = 0.5, double window = 10.0, double eps_net = 0.2);

double path_length(const Trajectory& traj);

/// SR/FR over all runs; NTL and TRG averaged over Reached runs only (absent
/// when nothing reached).
MetricsSummary compute_metrics(const std::vector<RunRecord>& records);

/// results.csv surface: exact column order
/// scenario_id,method,seed,outcome,frozen,path_length_m,straight_line_m,ntl,trg_s
/// with absent NTL/TRG written as empty fields.
void write_records_csv(const std::vector<RunRecord>& records, std::ostream& os);
std::vector<RunRecord> read_records_csv(std::istream& is);

}  // namespace splatnav
