#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "splat_oracles.hpp"
#include "splatnav/esdf/esdf.hpp"

using namespace splatnav;

namespace {

// O(n^2 m) reference: scan every source cell for every query cell.
EsdfGrid2D brute_force_edt(const OccupancyGrid2D& occ, double d_max) {
    const auto& spec = occ.spec;
    EsdfGrid2D out = EsdfGrid2D::filled(spec, d_max);
    std::vector<Eigen::Vector2i> occupied, free_cells;
    for (int j = 0; j < spec.ny; ++j)
        for (int i = 0; i < spec.nx; ++i)
            (occ.occupied[spec.index(i, j)] ? occupied : free_cells).push_back({i, j});

    for (int j = 0; j < spec.ny; ++j) {
        for (int i = 0; i < spec.nx; ++i) {
            const bool is_occ = occ.occupied[spec.index(i, j)];
            const auto& sources = is_occ ? free_cells : occupied;
            double best = std::numeric_limits<double>::infinity();
            for (const auto& s : sources) {
                const double dx = s.x() - i, dy = s.y() - j;
                best = std::min(best, std::sqrt(dx * dx + dy * dy));
            }
            double d = std::min(best * spec.resolution, d_max);
            out.d[spec.index(i, j)] = is_occ ? -d : d;
        }
    }
    return out;
}

OccupancyGrid2D random_occupancy(std::mt19937_64& rng, int nx, int ny, double fill) {
    OccupancyGrid2D occ = OccupancyGrid2D::empty({0.25, {-1.0, 2.0}, nx, ny});
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& o : occ.occupied) o = u(rng) < fill ? 1 : 0;
    return occ;
}

VoxelGrid test_volume(double value, int nx = 3, int ny = 3, int nz = 4) {
    return VoxelGrid::filled({0.2, {0.0, 0.0, 0.15}, nx, ny, nz}, value);
}

}  // namespace

TEST_CASE("edt examples: all free, single obstacle 3-4-5") {
    OccupancyGrid2D occ = OccupancyGrid2D::empty({1.0, {0.0, 0.0}, 8, 8});
    auto all_free = edt_signed(occ, 100.0);
    for (double d : all_free.d) CHECK(d == 100.0);

    occ.occupied[occ.spec.index(0, 0)] = 1;
    const auto esdf = edt_signed(occ, 100.0);
    CHECK(esdf.d[occ.spec.index(3, 4)] == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(esdf.d[occ.spec.index(0, 0)] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(esdf.d[occ.spec.index(1, 0)] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("edt matches brute force on random grids") {
    std::mt19937_64 rng(83);
    std::uniform_int_distribution<int> size(1, 64);
    std::uniform_real_distribution<double> fill(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        const auto occ = random_occupancy(rng, size(rng), size(rng), fill(rng));
        const auto fast = edt_signed(occ, 8.0);
        const auto ref = brute_force_edt(occ, 8.0);
        for (std::size_t i = 0; i < fast.d.size(); ++i) {
            CHECK(fast.d[i] == doctest::Approx(ref.d[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("edt satisfies the discrete Lipschitz bound between neighbors") {
    std::mt19937_64 rng(89);
    const auto occ = random_occupancy(rng, 48, 32, 0.1);
    const auto esdf = edt_signed(occ, 100.0);
    const double res = occ.spec.resolution;
    for (int j = 0; j < occ.spec.ny; ++j) {
        for (int i = 0; i + 1 < occ.spec.nx; ++i) {
            const double a = esdf.d[occ.spec.index(i, j)];
            const double b = esdf.d[occ.spec.index(i + 1, j)];
            CHECK(std::fabs(a - b) <= res + 2.0 * res + 1e-12);
        }
    }
}

TEST_CASE("build_cost_volume: empty field, means-only deposit, analytic vs sampled") {
    const Grid3Spec spec{0.25, {-2.0, -2.0, -2.0}, 16, 16, 16};

    SplatField empty;
    for (auto mode : {VolumeMode::Analytic, VolumeMode::SampledPoints, VolumeMode::MeansOnly}) {
        const auto vol = build_cost_volume(empty, spec, mode, 1.0);
        CHECK(std::all_of(vol.values.begin(), vol.values.end(),
                          [](double v) { return v == 0.0; }));
    }

    SplatField one;
    GaussianPrimitive g;
    g.mu = {0.1, 0.1, 0.1};
    g.scale = Eigen::Vector3d::Constant(0.3);
    g.opacity_logit = 60.0;
    g.cost = 1.0;
    one.primitives.push_back(g);
    const auto means = build_cost_volume(one, spec, VolumeMode::MeansOnly);
    int nonzero = 0;
    for (double v : means.values) nonzero += v > 0.0 ? 1 : 0;
    CHECK(nonzero == 1);
    const auto c = spec.cell_of(g.mu);
    CHECK(means.values[spec.index(c.x(), c.y(), c.z())] == doctest::Approx(1.0));

    // analytic voxels equal query_field at voxel centers
    std::mt19937_64 rng(97);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SplatField field;
    for (int i = 0; i < 5; ++i) {
        GaussianPrimitive p;
        p.mu = {u(rng), u(rng), u(rng)};
        p.scale = Eigen::Vector3d::Constant(0.2 + 0.2 * std::fabs(u(rng)));
        p.rot = Eigen::Quaterniond(u(rng) + 2.0, u(rng), u(rng), u(rng)).normalized();
        p.opacity_logit = u(rng);
        p.cost = 0.4 + 0.3 * u(rng);
        field.primitives.push_back(p);
    }
    const auto analytic = build_cost_volume(field, spec, VolumeMode::Analytic);
    for (int k = 0; k < spec.nz; k += 3)
        for (int j = 0; j < spec.ny; j += 3)
            for (int i = 0; i < spec.nx; i += 3) {
                const double q = query_field(field, spec.center_of(i, j, k));
                CHECK(analytic.values[spec.index(i, j, k)] == doctest::Approx(q).epsilon(1e-9));
            }

    // sampled(1.0) tracks analytic within the declared slack
    const auto sampled = build_cost_volume(field, spec, VolumeMode::SampledPoints, 1.0);
    for (std::size_t i = 0; i < sampled.values.size(); ++i) {
        CHECK(std::fabs(sampled.values[i] - analytic.values[i]) < 0.15 + 0.35);
    }

    // sampling determinism
    const auto sampled2 = build_cost_volume(field, spec, VolumeMode::SampledPoints, 1.0);
    CHECK(sampled.values == sampled2.values);
}

TEST_CASE("volume_to_distance scaling law") {
    auto vol = test_volume(1.0);
    CHECK(volume_to_distance(vol, 100.0).values[0] == 0.0);
    vol.values.assign(vol.values.size(), 0.0);
    CHECK(volume_to_distance(vol, 100.0).values[0] == 100.0);
    vol.values.assign(vol.values.size(), 0.5);
    CHECK(volume_to_distance(vol, 100.0).values[0] == 50.0);

    // inverse identity on a dense sweep
    for (int i = 0; i <= 1000; ++i) {
        const double c = i / 1000.0;
        vol.values[0] = c;
        const double d = volume_to_distance(vol, 100.0).values[0];
        CHECK(d == (1.0 - c) * 100.0);
        CHECK(std::fabs((1.0 - d / 100.0) - c) < 1e-12);
    }
}

TEST_CASE("rasterize_to_ground band reduction") {
    auto vol = test_volume(7.0);
    const auto flat = rasterize_to_ground(vol, 0.1, 0.8);
    for (double d : flat.d) CHECK(d == 7.0);

    // one column with in-band values {10, 3, 8}: layers at z=0.15,0.35,0.55,0.75
    vol = test_volume(50.0);
    const auto& s = vol.spec;
    vol.values[s.index(1, 1, 0)] = 10.0;
    vol.values[s.index(1, 1, 1)] = 3.0;
    vol.values[s.index(1, 1, 2)] = 8.0;
    vol.values[s.index(1, 1, 3)] = 1.0;  // z=0.75, still in band
    const auto out = rasterize_to_ground(vol, 0.1, 0.6);  // layers 0..2 only
    CHECK(out.d[out.spec.index(1, 1)] == 3.0);

    CHECK_THROWS_AS(rasterize_to_ground(vol, 5.0, 6.0), EmptyBand);

    // never below the in-band column minimum
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (auto& v : vol.values) v = u(rng);
    const auto r = rasterize_to_ground(vol, 0.1, 0.8);
    for (int j = 0; j < s.ny; ++j)
        for (int i = 0; i < s.nx; ++i) {
            double mn = std::numeric_limits<double>::infinity();
            for (int k = 0; k < s.nz; ++k) mn = std::min(mn, vol.values[s.index(i, j, k)]);
            CHECK(r.d[r.spec.index(i, j)] == doctest::Approx(mn));
        }
}

TEST_CASE("inflate_soft examples and monotonicity") {
    EsdfGrid2D esdf = EsdfGrid2D::filled({0.5, {0, 0}, 8, 4}, 0.0);
    std::mt19937_64 rng(103);
    std::uniform_real_distribution<double> u(-1.0, 9.0);
    for (auto& d : esdf.d) d = u(rng);

    const auto same = inflate_soft(esdf, 0.0, 1.0);
    CHECK(same.d == esdf.d);

    esdf.d[0] = 0.0;
    esdf.d[1] = 10.0 * 0.7;  // 10 sigma at sigma=0.7
    const auto out = inflate_soft(esdf, 0.3, 0.7);
    CHECK(out.d[0] == doctest::Approx(-0.3));
    CHECK(std::fabs(out.d[1] - esdf.d[1]) < 1e-20 * 0.3);

    // order-preserving, never increasing
    for (std::size_t i = 0; i < esdf.d.size(); ++i) CHECK(out.d[i] <= esdf.d[i]);
    for (std::size_t i = 0; i < esdf.d.size(); ++i)
        for (std::size_t j = 0; j < esdf.d.size(); ++j)
            if (esdf.d[i] <= esdf.d[j]) CHECK(out.d[i] <= out.d[j] + 1e-15);
}

TEST_CASE("fuse selects per the front-region membership") {
    const Grid2Spec spec{0.25, {-5.0, -5.0}, 40, 40};
    auto gsplat = EsdfGrid2D::filled(spec, 1.0);
    auto lidar = EsdfGrid2D::filled(spec, 2.0);
    const FrontRegion region{2.0, 4.0};

    // robot at origin facing +x
    const Pose3 robot = Pose3::identity();
    const auto fused = fuse(gsplat, lidar, robot, region);
    CHECK(fused.d[spec.index(spec.cell_of({1.0, 0.0}).x(), spec.cell_of({1.0, 0.0}).y())] ==
          1.0);
    CHECK(fused.d[spec.index(spec.cell_of({-1.0, 0.0}).x(), spec.cell_of({-1.0, 0.0}).y())] ==
          2.0);

    // tiny region covering no cell centers -> all lidar
    const FrontRegion none{1e-9, 1e-9};
    Pose3 offgrid = Pose3::translation({0.111, 0.111, 0.0});
    const auto all_lidar = fuse(gsplat, lidar, offgrid, none);
    CHECK(all_lidar.d == lidar.d);

    // region covering the whole grid -> all gsplat
    const FrontRegion all{100.0, 200.0};
    Pose3 corner = Pose3::translation({-5.0, 0.0, 0.0});
    const auto all_gs = fuse(gsplat, lidar, corner, all);
    CHECK(all_gs.d == gsplat.d);

    // idempotence
    const auto twice = fuse(fused, lidar, robot, region);
    CHECK(twice.d == fused.d);

    Grid2Spec other = spec;
    other.nx = 39;
    EsdfGrid2D wrong = EsdfGrid2D::filled(other, 0.0);
    CHECK_THROWS_AS(fuse(gsplat, wrong, robot, region), SpecMismatch);
}

TEST_CASE("lidar_esdf composes band filtering with the EDT") {
    const Grid2Spec spec{0.5, {-4.0, -4.0}, 17, 17};
    EsdfConfig cfg;
    cfg.lidar_truncation = 5.0;

    const auto none = lidar_esdf({}, spec, cfg);
    for (double d : none.d) CHECK(d == 5.0);

    // ground return below the band leaves the grid free
    const auto ground_only = lidar_esdf({{1.0, 1.0, 0.02}}, spec, cfg);
    for (double d : ground_only.d) CHECK(d == 5.0);

    // one in-band return occupies exactly one cell
    const auto one = lidar_esdf({{0.0, 0.0, 0.5}}, spec, cfg);
    const auto c = spec.cell_of({0.0, 0.0});
    CHECK(one.d[spec.index(c.x(), c.y())] < 0.0);
    CHECK(one.d[spec.index(c.x() + 3, c.y() + 4)] == doctest::Approx(2.5));  // 3-4-5
}

TEST_CASE("pfm round trip") {
    std::mt19937_64 rng(107);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    EsdfGrid2D esdf = EsdfGrid2D::filled({0.125, {-2.0, 3.0}, 23, 17}, 0.0);
    for (auto& d : esdf.d) d = u(rng);

    const auto dir = std::filesystem::temp_directory_path() / "splatnav_pfm_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "esdf.pfm").string();
    write_pfm(esdf, path, 100.0);
    const auto back = read_pfm(path);

    REQUIRE(back.spec.nx == esdf.spec.nx);
    REQUIRE(back.spec.ny == esdf.spec.ny);
    CHECK(back.spec.resolution == doctest::Approx(esdf.spec.resolution));
    CHECK(back.spec.origin.x() == doctest::Approx(esdf.spec.origin.x()));
    for (std::size_t i = 0; i < esdf.d.size(); ++i) {
        CHECK(back.d[i] == doctest::Approx(esdf.d[i]).epsilon(1e-6));
    }
    std::filesystem::remove_all(dir);
}
