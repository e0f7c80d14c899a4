// Copyright 2026 splatnav contributors
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <string>
#include <vector>

#include "splatnav/harness/metrics.hpp"
#include "splatnav/planner/navigate.hpp"

namespace splatnav {

/// Applies a method variant to a pipeline config: all-points sampling,
/// means-only deposits, or the LiDAR-only geometric baseline (empty front
/// region, no splat work).
PipelineConfig config_for_method(PipelineConfig base, Method method);

/// One scenario run; (scenario, method, seed) fully determine the record.
RunRecord run_once(const Scene& scene, const PipelineConfig& base, Method method,
                   const std::string& scenario_id, int seed);

/// Runs methods x seeds, in parallel up to SPLATNAV_THREADS (default: hardware
/// concurrency), and returns records sorted by (scenario, method, seed).
std::vector<RunRecord> run_eval(const Scene& scene, const PipelineConfig& base,
                                const std::vector<Method>& methods, int num_seeds,
                                const std::string& scenario_id);

struct AblationRow {
    std::string label;
    double sr_pct = 0.0;
};

/// Fig-5-style ablations: success rate vs points-per-Gaussian density (with
/// the means-only anchor row) and vs front-region depth at fixed width.
std::vector<AblationRow> run_ablation_density(const Scene& scene, const PipelineConfig& base,
                                              const std::vector<double>& fractions,
                                              int num_seeds,
                                              const std::string& scenario_id);
std::vector<AblationRow> run_ablation_depth(const Scene& scene, const PipelineConfig& base,
                                            const std::vector<double>& depths, int num_seeds,
                                            const std::string& scenario_id);

void write_ablation_csv(const std::vector<AblationRow>& rows, const std::string& key_column,
                        std::ostream& os);

/// Run-level parallelism cap from SPLATNAV_THREADS (>=1).
int thread_cap();

}  // namespace splatnav
