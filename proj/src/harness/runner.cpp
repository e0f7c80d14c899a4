// Copyright 2026 splatnav contributors
// Licensed under the Apache License, Version 2.0.

#include "splatnav/harness/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <thread>

namespace splatnav {

int thread_cap() {
    if (const char* env = std::getenv("SPLATNAV_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

PipelineConfig config_for_method(PipelineConfig base, Method method) {
    switch (method) {
        case Method::SplatbloxAllPoints:
            base.volume_mode = VolumeMode::SampledPoints;
            base.volume_fraction = 1.0;
            base.geometric_only = false;
            break;
        case Method::SplatbloxMeansOnly:
            base.volume_mode = VolumeMode::MeansOnly;
            base.geometric_only = false;
            break;
        case Method::GeometricOnly:
            base.geometric_only = true;
            break;
    }
    return base;
}

RunRecord run_once(const Scene& scene, const PipelineConfig& base, Method method,
                   const std::string& scenario_id, int seed) {
    const PipelineConfig cfg = config_for_method(base, method);
    const NavigationResult nav = navigate(scene, cfg, static_cast<std::uint64_t>(seed));

    RunRecord rec;
    rec.scenario_id = scenario_id;
    rec.method = method;
    rec.seed = seed;
    rec.outcome = nav.outcome;
    rec.frozen = nav.outcome == Outcome::Frozen;
    rec.path_length = path_length(nav.trajectory);
    rec.straight_line = (scene.goal - scene.start).norm();
    if (nav.outcome == Outcome::Reached) {
        if (rec.straight_line > 1e-9) rec.ntl = rec.path_length / rec.straight_line;
        rec.trg_s = nav.time_to_goal;
    }
    return rec;
}

namespace {

struct Task {
    Method method;
    int seed;
};

std::vector<RunRecord> run_tasks(const Scene& scene, const PipelineConfig& base,
                                 const std::vector<Task>& tasks,
                                 const std::string& scenario_id,
                                 const std::vector<PipelineConfig>* per_task_cfg = nullptr) {
    std::vector<RunRecord> records(tasks.size());
    std::atomic<std::size_t> next{0};
    const int threads =
        std::max(1, std::min<int>(thread_cap(), static_cast<int>(tasks.size())));

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const PipelineConfig& cfg = per_task_cfg ? (*per_task_cfg)[i] : base;
            records[i] = run_once(scene, cfg, tasks[i].method, scenario_id, tasks[i].seed);
        }
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return records;
}

double success_rate(const std::vector<RunRecord>& records) {
    int reached = 0;
    for (const auto& r : records) reached += r.outcome == Outcome::Reached ? 1 : 0;
    return records.empty() ? 0.0 : 100.0 * reached / static_cast<double>(records.size());
}

}  // namespace

std::vector<RunRecord> run_eval(const Scene& scene, const PipelineConfig& base,
                                const std::vector<Method>& methods, int num_seeds,
                                const std::string& scenario_id) {
    std::vector<Task> tasks;
    for (Method m : methods) {
        for (int seed = 0; seed < num_seeds; ++seed) tasks.push_back({m, seed});
    }
    auto records = run_tasks(scene, base, tasks, scenario_id);
    std::sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
        if (a.scenario_id != b.scenario_id) return a.scenario_id < b.scenario_id;
        if (a.method != b.method) return to_string(a.method) < to_string(b.method);
        return a.seed < b.seed;
    });
    return records;
}

std::vector<AblationRow> run_ablation_density(const Scene& scene, const PipelineConfig& base,
                                              const std::vector<double>& fractions,
                                              int num_seeds,
                                              const std::string& scenario_id) {
    std::vector<AblationRow> rows;

    // means-only anchor row (the density -> 0 limit)
    {
        std::vector<Task> tasks;
        for (int seed = 0; seed < num_seeds; ++seed) {
            tasks.push_back({Method::SplatbloxMeansOnly, seed});
        }
        rows.push_back({"means", success_rate(run_tasks(scene, base, tasks, scenario_id))});
    }

    for (double f : fractions) {
        if (!(f > 0.0 && f <= 1.0)) throw ConfigError("density ablation: fraction not in (0,1]");
        PipelineConfig cfg = base;
        cfg.volume_mode = VolumeMode::SampledPoints;
        cfg.volume_fraction = f;
        cfg.geometric_only = false;
        std::vector<Task> tasks;
        std::vector<PipelineConfig> cfgs;
        for (int seed = 0; seed < num_seeds; ++seed) {
            tasks.push_back({Method::SplatbloxAllPoints, seed});
            cfgs.push_back(cfg);
        }
        char label[32];
        std::snprintf(label, sizeof(label), "%g", f);
        rows.push_back(
            {label, success_rate(run_tasks(scene, cfg, tasks, scenario_id, &cfgs))});
    }
    return rows;
}

std::vector<AblationRow> run_ablation_depth(const Scene& scene, const PipelineConfig& base,
                                            const std::vector<double>& depths, int num_seeds,
                                            const std::string& scenario_id) {
    std::vector<AblationRow> rows;
    for (double depth : depths) {
        if (depth <= 0.0) throw ConfigError("depth ablation: depth must be positive");
        PipelineConfig cfg = base;
        cfg.front.depth = depth;  // width stays fixed
        std::vector<Task> tasks;
        std::vector<PipelineConfig> cfgs;
        for (int seed = 0; seed < num_seeds; ++seed) {
            tasks.push_back({Method::SplatbloxAllPoints, seed});
            cfgs.push_back(cfg);
        }
        char label[32];
        std::snprintf(label, sizeof(label), "%g", depth);
        rows.push_back(
            {label, success_rate(run_tasks(scene, cfg, tasks, scenario_id, &cfgs))});
    }
    return rows;
}

void write_ablation_csv(const std::vector<AblationRow>& rows, const std::string& key_column,
                        std::ostream& os) {
    os << key_column << ",success_rate_pct\n";
    char buf[64];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.1f", r.sr_pct);
        os << r.label << ',' << buf << '\n';
    }
}

}  // namespace splatnav
