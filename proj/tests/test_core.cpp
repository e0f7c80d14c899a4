#include <doctest.h>

#include <Eigen/Core>
#include <cmath>
#include <random>

#include "splatnav/core/geometry.hpp"
#include "splatnav/core/grid.hpp"

using splatnav::CameraModel;
using splatnav::Grid2Spec;
using splatnav::Grid3Spec;
using splatnav::pinhole_project;
using splatnav::Pose3;
using splatnav::se3_apply;

namespace {

Pose3 random_pose(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    return Pose3::from_wxyz(n(rng), n(rng), n(rng), n(rng),
                            Eigen::Vector3d(n(rng), n(rng), n(rng)) * 3.0);
}

}  // namespace

TEST_CASE("se3_apply basics") {
    CHECK(se3_apply(Pose3::identity(), {1, 2, 3}).isApprox(Eigen::Vector3d(1, 2, 3)));
    CHECK(se3_apply(Pose3::translation({0, 0, 5}), {1, 2, 3})
              .isApprox(Eigen::Vector3d(1, 2, 8)));
    const Pose3 yaw90 = Pose3::from_axis_angle(Eigen::Vector3d::UnitZ(), M_PI / 2);
    CHECK((se3_apply(yaw90, {1, 0, 0}) - Eigen::Vector3d(0, 1, 0)).norm() < 1e-9);
}

TEST_CASE("pose inverse and composition") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        const Pose3 p = random_pose(rng);
        CHECK(std::fabs(p.rot.norm() - 1.0) < 1e-9);

        const Pose3 id = p.compose(p.inverse());
        CHECK(std::fabs(id.rot.w()) > 1.0 - 1e-9);  // rotation angle ~ 0
        CHECK(id.trans.norm() < 1e-9);

        // associativity
        const Pose3 a = random_pose(rng), b = random_pose(rng), c = random_pose(rng);
        const Eigen::Vector3d x(0.3, -1.2, 2.0);
        const Eigen::Vector3d lhs = a.compose(b.compose(c)).apply(x);
        const Eigen::Vector3d rhs = a.compose(b).compose(c).apply(x);
        CHECK((lhs - rhs).norm() < 1e-9);
    }
}

TEST_CASE("pinhole projection examples") {
    CameraModel cam{100.0, 100.0, 50.0, 50.0, 100, 100, 0.01};
    REQUIRE(cam.valid());

    auto p0 = pinhole_project(cam, {0, 0, 1});
    REQUIRE(p0.has_value());
    CHECK(p0->isApprox(Eigen::Vector2d(50, 50)));

    auto p1 = pinhole_project(cam, {1, 0, 2});
    REQUIRE(p1.has_value());
    CHECK(p1->isApprox(Eigen::Vector2d(100, 50)));

    CHECK_FALSE(pinhole_project(cam, {0, 0, 0.001}).has_value());
}

TEST_CASE("pinhole projection is homogeneous of degree zero") {
    CameraModel cam{80.0, 120.0, 32.0, 24.0, 64, 48, 0.01};
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::uniform_real_distribution<double> uz(0.5, 10.0);
    for (int i = 0; i < 100; ++i) {
        const Eigen::Vector3d p(u(rng), u(rng), uz(rng));
        const double lam = 1.0 + 3.0 * std::fabs(u(rng));
        auto a = pinhole_project(cam, p);
        auto b = pinhole_project(cam, lam * p);
        REQUIRE(a.has_value());
        REQUIRE(b.has_value());
        CHECK((*a - *b).norm() < 1e-9);
    }
}

TEST_CASE("grid world/cell round trip") {
    Grid2Spec g2{0.25, {-3.0, 2.0}, 40, 30};
    REQUIRE(g2.valid());
    for (int j = 0; j < g2.ny; ++j)
        for (int i = 0; i < g2.nx; ++i) {
            const auto c = g2.cell_of(g2.center_of(i, j));
            CHECK(c.x() == i);
            CHECK(c.y() == j);
        }

    Grid3Spec g3{0.2, {1.0, -1.0, 0.15}, 8, 7, 5};
    for (int k = 0; k < g3.nz; ++k)
        for (int j = 0; j < g3.ny; ++j)
            for (int i = 0; i < g3.nx; ++i) {
                const auto c = g3.cell_of(g3.center_of(i, j, k));
                CHECK((c == Eigen::Vector3i(i, j, k)));
            }
}
