#include <doctest.h>

#include <random>

#include "splatnav/splat/ssim.hpp"

using splatnav::CostImage;
using splatnav::DimensionMismatch;

namespace {

CostImage random_image(int w, int h, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    CostImage img = CostImage::filled(w, h, 0.0);
    for (auto& v : img.values) v = u(rng);
    return img;
}

constexpr double kC1 = 0.01 * 0.01;

}  // namespace

TEST_CASE("ssim self-similarity is exactly 1") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        const auto img = random_image(17 + trial, 13 + trial, rng);
        CHECK(splatnav::ssim(img, img) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("ssim of constant images matches the closed form") {
    for (auto [a, b] : {std::pair{0.2, 0.9}, {0.0, 1.0}, {0.5, 0.5}, {0.33, 0.66}}) {
        const auto ia = CostImage::filled(20, 16, a);
        const auto ib = CostImage::filled(20, 16, b);
        const double expected = (2.0 * a * b + kC1) / (a * a + b * b + kC1);
        CHECK(splatnav::ssim(ia, ib) == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("ssim is symmetric to the bit on random images") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = random_image(24, 18, rng);
        const auto b = random_image(24, 18, rng);
        CHECK(std::fabs(splatnav::ssim(a, b) - splatnav::ssim(b, a)) < 1e-12);
    }
}

TEST_CASE("ssim rejects mismatched sizes") {
    const auto a = CostImage::filled(8, 8, 0.5);
    const auto b = CostImage::filled(8, 9, 0.5);
    CHECK_THROWS_AS(splatnav::ssim(a, b), DimensionMismatch);
    CHECK_THROWS_AS(splatnav::loss(a, b), DimensionMismatch);
}

TEST_CASE("loss is zero iff identical and matches the constant-image closed form") {
    std::mt19937_64 rng(31);
    const auto img = random_image(20, 20, rng);
    CHECK(splatnav::loss(img, img) == doctest::Approx(0.0).epsilon(1e-9));

    const auto zeros = CostImage::filled(20, 20, 0.0);
    const auto ones = CostImage::filled(20, 20, 1.0);
    const double expected = 1.0 + (1.0 - kC1 / (1.0 + kC1));
    CHECK(splatnav::loss(zeros, ones) == doctest::Approx(expected).epsilon(1e-9));

    for (int trial = 0; trial < 10; ++trial) {
        const auto a = random_image(16, 12, rng);
        const auto b = random_image(16, 12, rng);
        CHECK(splatnav::loss(a, b) >= 0.0);
    }
}

TEST_CASE("loss gradient w.r.t. the rendered image matches finite differences") {
    std::mt19937_64 rng(37);
    auto x = random_image(13, 11, rng);
    const auto y = random_image(13, 11, rng);

    std::vector<double> grad;
    splatnav::loss_with_grad(x, y, grad);

    std::uniform_int_distribution<std::size_t> pick(0, x.values.size() - 1);
    const double h = 1e-6;
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t i = pick(rng);
        const double keep = x.values[i];
        x.values[i] = keep + h;
        const double lp = splatnav::loss(x, y);
        x.values[i] = keep - h;
        const double lm = splatnav::loss(x, y);
        x.values[i] = keep;
        const double fd = (lp - lm) / (2.0 * h);
        CHECK(grad[i] == doctest::Approx(fd).epsilon(1e-5));
    }
}
