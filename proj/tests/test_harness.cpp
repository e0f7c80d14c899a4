#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "splatnav/harness/metrics.hpp"
#include "splatnav/harness/scene_io.hpp"

using namespace splatnav;

namespace {

Trajectory stationary_then(double hold_s, double dt = 0.1) {
    Trajectory traj;
    RobotState s;
    for (double t = 0.0; t <= hold_s; t += dt) {
        s.t = t;
        traj.push_back(s);
    }
    return traj;
}

}  // namespace

TEST_CASE("detect_freeze: stuck, oscillating and moving trajectories") {
    const Eigen::Vector2d goal(50.0, 0.0);

    // stationary for 11 s: frozen once the first full window completes
    auto stuck = stationary_then(11.0);
    const auto f1 = detect_freeze(stuck, goal);
    CHECK(f1.frozen);
    CHECK(f1.first_time == doctest::Approx(10.0).epsilon(0.02));

    // oscillating +/- 5 cm for 12 s: path accrues but no net displacement
    Trajectory osc;
    RobotState s;
    for (int i = 0; i <= 120; ++i) {
        s.t = 0.1 * i;
        s.x = (i % 2 == 0) ? 0.05 : -0.05;
        osc.push_back(s);
    }
    CHECK(path_length(osc) > 2.0);
    CHECK(detect_freeze(osc, goal).frozen);

    // steady 1 m/s: never frozen
    Trajectory moving;
    for (int i = 0; i <= 300; ++i) {
        RobotState m;
        m.t = 0.1 * i;
        m.x = 0.1 * i;
        moving.push_back(m);
    }
    CHECK_FALSE(detect_freeze(moving, goal).frozen);

    // terminal settling near the goal does not count
    Trajectory settle = stationary_then(15.0);
    CHECK_FALSE(detect_freeze(settle, Eigen::Vector2d(0.1, 0.0)).frozen);

    // windows shorter than `window` never fire
    CHECK_FALSE(detect_freeze(stationary_then(8.0), goal).frozen);
}

TEST_CASE("compute_metrics: rates, ratios and the all-failed case") {
    std::vector<RunRecord> records;
    for (int i = 0; i < 10; ++i) {
        RunRecord r;
        r.scenario_id = "s";
        r.seed = i;
        if (i < 9) {
            r.outcome = Outcome::Reached;
            r.path_length = 13.0;
            r.straight_line = 10.0;
            r.ntl = 1.3;
            r.trg_s = 20.0;
        } else {
            r.outcome = Outcome::Frozen;
            r.frozen = true;
        }
        records.push_back(r);
    }
    const auto m = compute_metrics(records);
    CHECK(m.sr_pct == doctest::Approx(90.0));
    CHECK(m.fr_pct == doctest::Approx(10.0));
    REQUIRE(m.ntl_mean.has_value());
    CHECK(*m.ntl_mean == doctest::Approx(1.30));

    // single-run NTL is the plain ratio
    const auto single = compute_metrics({records[0]});
    CHECK(*single.ntl_mean == doctest::Approx(1.30));

    // no successes: NTL/TRG absent
    std::vector<RunRecord> failed(records.begin() + 9, records.end());
    const auto none = compute_metrics(failed);
    CHECK_FALSE(none.ntl_mean.has_value());
    CHECK_FALSE(none.trg_mean_s.has_value());

    CHECK_THROWS_AS(compute_metrics({}), EmptyInput);
}

TEST_CASE("records csv round trip with empty NTL/TRG fields") {
    std::vector<RunRecord> records;
    RunRecord a;
    a.scenario_id = "corridor_bushes";
    a.method = Method::SplatbloxAllPoints;
    a.seed = 3;
    a.outcome = Outcome::Reached;
    a.path_length = 12.5;
    a.straight_line = 12.0;
    a.ntl = 12.5 / 12.0;
    a.trg_s = 14.2;
    records.push_back(a);

    RunRecord b;
    b.scenario_id = "grass_field";
    b.method = Method::GeometricOnly;
    b.seed = 0;
    b.outcome = Outcome::Frozen;
    b.frozen = true;
    b.path_length = 3.25;
    b.straight_line = 14.0;
    records.push_back(b);

    std::stringstream ss;
    write_records_csv(records, ss);
    const std::string text = ss.str();
    CHECK(text.find("scenario_id,method,seed,outcome,frozen,path_length_m,straight_line_m,"
                    "ntl,trg_s") == 0);
    CHECK(text.find(",,") != std::string::npos);  // absent fields are empty

    std::stringstream in(text);
    const auto back = read_records_csv(in);
    REQUIRE(back.size() == 2);
    CHECK(back[0].scenario_id == a.scenario_id);
    CHECK(back[0].method == a.method);
    CHECK(back[0].seed == a.seed);
    CHECK(back[0].outcome == a.outcome);
    CHECK(back[0].ntl.has_value());
    CHECK(*back[0].ntl == doctest::Approx(*a.ntl));
    CHECK_FALSE(back[1].ntl.has_value());
    CHECK_FALSE(back[1].trg_s.has_value());
    CHECK(back[1].frozen);
}

TEST_CASE("builtin scenarios load, validate and serialize") {
    for (const char* name : {"corridor_bushes", "grass_field", "long_range", "depth_gauntlet"}) {
        const auto sf = load_scene_file(name);
        sf.scene.validate();
        sf.config.validate();
        CHECK(!sf.scene.obstacles.empty());

        const std::string path = std::string("/tmp/splatnav_scene_") + name + ".json";
        save_scene_json(sf.scene, path);
        const auto back = load_scene_file(path);
        CHECK(back.scene.obstacles.size() == sf.scene.obstacles.size());
        CHECK(back.scene.goal.isApprox(sf.scene.goal));
        std::remove(path.c_str());
    }
    CHECK_THROWS_AS(load_scene_file("/nonexistent/scene.json"), IoError);
}

TEST_CASE("scene config overrides reach the pipeline config") {
    const char* path = "/tmp/splatnav_cfg_test.json";
    {
        std::ofstream os(path);
        os << R"({
            "bounds": [-5, -5, 5, 5],
            "default_ground": "Stable",
            "obstacles": [],
            "patches": [],
            "start": [0, 0, 0.5],
            "goal": [3, 0],
            "config": {
                "costs": {"Unknown": 0.55},
                "mppi": {"rollouts": 64, "d_safe": 0.7},
                "nav": {"max_time": 33.0, "v_max": 2.5},
                "front": {"depth": 1.5},
                "esdf": {"d_max": 7.0},
                "lidar": {"azimuth_steps": 256}
            }
        })";
    }
    const auto sf = load_scene_file(path);
    CHECK(sf.scene.start_heading == doctest::Approx(0.5));
    CHECK(sf.config.costs.cost_of(TerrainClass::Unknown) == doctest::Approx(0.55));
    CHECK(sf.config.mppi.rollouts == 64);
    CHECK(sf.config.mppi.d_safe == doctest::Approx(0.7));
    CHECK(sf.config.max_time == doctest::Approx(33.0));
    CHECK(sf.config.mppi.limits.v_max == doctest::Approx(2.5));
    CHECK(sf.config.front.depth == doctest::Approx(1.5));
    CHECK(sf.config.esdf.d_max == doctest::Approx(7.0));
    // derived values follow the overrides
    CHECK(sf.config.spawn.delta_theta == doctest::Approx(2.0 * M_PI / 256.0));
    std::remove(path);
}
