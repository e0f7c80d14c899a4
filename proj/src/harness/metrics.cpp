// Copyright 2026 splatnav contributors
// Licensed under the Apache License, Version 2.0.

#include "splatnav/harness/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "splatnav/core/errors.hpp"

namespace splatnav {

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::Reached: return "Reached";
        case Outcome::Frozen: return "Frozen";
        case Outcome::Collided: return "Collided";
        case Outcome::Timeout: return "Timeout";
    }
    return "Timeout";
}

std::string to_string(Method m) {
    switch (m) {
        case Method::SplatbloxAllPoints: return "SplatbloxAllPoints";
        case Method::SplatbloxMeansOnly: return "SplatbloxMeansOnly";
        case Method::GeometricOnly: return "GeometricOnly";
    }
    return "SplatbloxAllPoints";
}

Outcome outcome_from_string(const std::string& s) {
    if (s == "Reached") return Outcome::Reached;
    if (s == "Frozen") return Outcome::Frozen;
    if (s == "Collided") return Outcome::Collided;
    if (s == "Timeout") return Outcome::Timeout;
    throw ConfigError("unknown outcome: " + s);
}

Method method_from_string(const std::string& s) {
    if (s == "SplatbloxAllPoints" || s == "all-points") return Method::SplatbloxAllPoints;
    if (s == "SplatbloxMeansOnly" || s == "means-only") return Method::SplatbloxMeansOnly;
    if (s == "GeometricOnly" || s == "geometric") return Method::GeometricOnly;
    throw ConfigError("unknown method: " + s);
}

FreezeCheck detect_freeze(const Trajectory& traj, const Eigen::Vector2d& goal, double r_goal,
                          double window, double eps_net) {
    FreezeCheck out;
    if (traj.size() < 2) return out;
    for (std::size_t i = 1; i < traj.size(); ++i) {
        if (traj[i].t <= traj[i - 1].t) throw ConfigError("detect_freeze: non-increasing time");
    }
    std::size_t tail = 0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double t0 = traj[i].t - window;
        if (traj[tail].t > t0) continue;  // window not complete yet
        while (tail + 1 < i && traj[tail + 1].t <= t0) ++tail;
        const double net = (traj[i].position() - traj[tail].position()).norm();
        const double dist_goal = (traj[i].position() - goal).norm();
        if (net < eps_net && dist_goal > r_goal) {
            out.frozen = true;
            out.first_time = traj[i].t;
            return out;
        }
    }
    return out;
}

double path_length(const Trajectory& traj) {
    double total = 0.0;
    for (std::size_t i = 1; i < traj.size(); ++i) {
        total += (traj[i].position() - traj[i - 1].position()).norm();
    }
    return total;
}

MetricsSummary compute_metrics(const std::vector<RunRecord>& records) {
    if (records.empty()) throw EmptyInput("compute_metrics: no records");
    MetricsSummary m;
    int reached = 0, frozen = 0;
    double ntl_sum = 0.0, trg_sum = 0.0;
    int ntl_n = 0, trg_n = 0;
    for (const auto& r : records) {
        if (r.outcome == Outcome::Reached) {
            ++reached;
            if (r.ntl) {
                ntl_sum += *r.ntl;
                ++ntl_n;
            }
            if (r.trg_s) {
                trg_sum += *r.trg_s;
                ++trg_n;
            }
        }
        if (r.frozen) ++frozen;
    }
    const double n = static_cast<double>(records.size());
    m.sr_pct = 100.0 * reached / n;
    m.fr_pct = 100.0 * frozen / n;
    if (ntl_n > 0) m.ntl_mean = ntl_sum / ntl_n;
    if (trg_n > 0) m.trg_mean_s = trg_sum / trg_n;
    return m;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

void write_records_csv(const std::vector<RunRecord>& records, std::ostream& os) {
    os << "scenario_id,method,seed,outcome,frozen,path_length_m,straight_line_m,ntl,trg_s\n";
    for (const auto& r : records) {
        os << r.scenario_id << ',' << to_string(r.method) << ',' << r.seed << ','
           << to_string(r.outcome) << ',' << (r.frozen ? 1 : 0) << ',' << fmt(r.path_length)
           << ',' << fmt(r.straight_line) << ',' << (r.ntl ? fmt(*r.ntl) : "") << ','
           << (r.trg_s ? fmt(*r.trg_s) : "") << '\n';
    }
}

std::vector<RunRecord> read_records_csv(std::istream& is) {
    std::vector<RunRecord> out;
    std::string line;
    if (!std::getline(is, line)) throw IoError("empty results csv");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cols.push_back(cell);
        while (cols.size() < 9) cols.emplace_back();
        RunRecord r;
        r.scenario_id = cols[0];
        r.method = method_from_string(cols[1]);
        r.seed = std::stoi(cols[2]);
        r.outcome = outcome_from_string(cols[3]);
        r.frozen = cols[4] == "1";
        r.path_length = std::stod(cols[5]);
        r.straight_line = std::stod(cols[6]);
        if (!cols[7].empty()) r.ntl = std::stod(cols[7]);
        if (!cols[8].empty()) r.trg_s = std::stod(cols[8]);
        out.push_back(r);
    }
    return out;
}

}  // namespace splatnav
