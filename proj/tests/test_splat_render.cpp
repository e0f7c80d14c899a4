#include <doctest.h>

#include <random>
#include <sstream>

#include "splat_oracles.hpp"
#include "splatnav/splat/render.hpp"

using namespace splatnav;

namespace {

CameraModel small_cam() {
    CameraModel cam;
    cam.fx = cam.fy = 20.0;
    cam.cx = 7.5;
    cam.cy = 7.5;
    cam.width = 16;
    cam.height = 16;
    cam.z_near = 0.05;
    return cam;
}

}  // namespace

TEST_CASE("covariance_of examples") {
    GaussianPrimitive g;
    g.scale = {1.0, 2.0, 3.0};
    CHECK(covariance_of(g).isApprox(Eigen::Vector3d(1, 4, 9).asDiagonal().toDenseMatrix()));

    g.rot = Eigen::Quaterniond(Eigen::AngleAxisd(M_PI / 2, Eigen::Vector3d::UnitZ()));
    g.scale = {1.0, 2.0, 1.0};
    const Eigen::Matrix3d cov = covariance_of(g);
    CHECK(cov.isApprox(Eigen::Vector3d(4, 1, 1).asDiagonal().toDenseMatrix(), 1e-12));

    std::mt19937_64 rng(41);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        GaussianPrimitive r;
        r.scale = {0.1 + std::fabs(n(rng)), 0.1 + std::fabs(n(rng)), 0.1 + std::fabs(n(rng))};
        r.rot = Eigen::Quaterniond(n(rng), n(rng), n(rng), n(rng)).normalized();
        const Eigen::Matrix3d c = covariance_of(r);
        CHECK((c - c.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(c).eigenvalues().minCoeff() > 0.0);
    }
}

TEST_CASE("project_gaussian: on-axis isotropic closed form and scaling law") {
    CameraModel cam;
    cam.fx = cam.fy = 100.0;
    cam.cx = cam.cy = 50.0;
    cam.width = 100;
    cam.height = 100;
    cam.z_near = 0.05;

    GaussianPrimitive g;
    g.scale = Eigen::Vector3d::Constant(0.5);
    g.mu = {0.0, 0.0, 5.0};
    g.opacity_logit = 0.0;
    g.cost = 0.5;

    const auto p = project_gaussian(g, Pose3::identity(), cam);
    REQUIRE(p.has_value());
    // (f*s/z)^2 = (100*0.5/5)^2 = 100
    CHECK((p->cov2d - 100.0 * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(p->mean2d.isApprox(Eigen::Vector2d(50, 50)));
    CHECK(p->depth == doctest::Approx(5.0));

    // finite-difference check of the pinhole jacobian underlying cov2d:
    // J column k ~ (project(t + h e_k) - project(t - h e_k)) / 2h
    const Eigen::Vector3d t = g.mu;
    const double h = 1e-6;
    Eigen::Matrix<double, 2, 3> jac_fd;
    for (int k = 0; k < 3; ++k) {
        Eigen::Vector3d tp = t, tm = t;
        tp[k] += h;
        tm[k] -= h;
        const auto pp = pinhole_project(cam, tp).value();
        const auto pm = pinhole_project(cam, tm).value();
        jac_fd.col(k) = (pp - pm) / (2.0 * h);
    }
    const Eigen::Matrix2d cov_fd =
        jac_fd * covariance_of(g) * jac_fd.transpose();
    CHECK((p->cov2d - cov_fd).cwiseAbs().maxCoeff() < 1e-3);

    // doubling depth quarters the covariance
    g.mu.z() = 10.0;
    const auto p2 = project_gaussian(g, Pose3::identity(), cam);
    REQUIRE(p2.has_value());
    CHECK((4.0 * p2->cov2d - p->cov2d).cwiseAbs().maxCoeff() < 1e-6);

    // behind camera
    g.mu = {0.0, 0.0, -1.0};
    CHECK_FALSE(project_gaussian(g, Pose3::identity(), cam).has_value());
}

TEST_CASE("render: empty field is pure background") {
    SplatField field;
    const auto img = render_cost_map(field, Pose3::identity(), small_cam(), 0.6);
    for (double v : img.values) CHECK(v == doctest::Approx(0.6));
    for (auto c : img.class_ids) CHECK(c == TerrainClass::Unknown);
}

TEST_CASE("render: saturating on-axis gaussian hits 1 at the center") {
    SplatField field;
    GaussianPrimitive g;
    g.mu = {0.0, 0.0, 2.0};
    g.scale = Eigen::Vector3d::Constant(0.4);
    g.opacity_logit = 40.0;  // sigmoid ~ 1
    g.cost = 1.0;
    field.primitives.push_back(g);

    CameraModel cam = small_cam();
    cam.cx = 8.0;
    cam.cy = 8.0;
    const auto img = render_cost_map(field, Pose3::identity(), cam, 0.0);
    CHECK(img.at(8, 8) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("render oracle equivalence on random small fields") {
    std::mt19937_64 rng(43);
    const CameraModel cam = small_cam();
    std::uniform_int_distribution<int> nprim(0, 5);
    for (int trial = 0; trial < 60; ++trial) {
        const auto field = testing::random_field(rng, nprim(rng), cam);
        const auto fast = render_cost_map(field, Pose3::identity(), cam, 0.6);
        const auto naive = testing::naive_render(field, Pose3::identity(), cam, 0.6);
        double max_err = 0.0;
        for (std::size_t i = 0; i < fast.values.size(); ++i) {
            max_err = std::max(max_err, std::fabs(fast.values[i] - naive.values[i]));
        }
        CHECK(max_err < 1e-6);
    }
}

TEST_CASE("render output is byte-identical under primitive permutation") {
    std::mt19937_64 rng(47);
    const CameraModel cam = small_cam();
    auto field = testing::random_field(rng, 5, cam);
    const auto ref = render_cost_map(field, Pose3::identity(), cam, 0.6);
    for (int trial = 0; trial < 10; ++trial) {
        std::shuffle(field.primitives.begin(), field.primitives.end(), rng);
        const auto img = render_cost_map(field, Pose3::identity(), cam, 0.6);
        CHECK(img.values == ref.values);
    }
}
