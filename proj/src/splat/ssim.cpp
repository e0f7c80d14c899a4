// Copyright 2026 splatnav contributors
// Licensed under the Apache License, Version 2.0.

#include "splatnav/splat/ssim.hpp"

#include <array>
#include <cmath>
#include <cstddef>

namespace splatnav {
namespace {

constexpr int kRadius = 5;  // 11x11 window
constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;

const std::array<double, 2 * kRadius + 1>& window_taps() {
    static const auto taps = [] {
        std::array<double, 2 * kRadius + 1> w{};
        double sum = 0.0;
        for (int k = -kRadius; k <= kRadius; ++k) {
            w[k + kRadius] = std::exp(-0.5 * (k * k) / (1.5 * 1.5));
            sum += w[k + kRadius];
        }
        for (auto& x : w) x /= sum;
        return w;
    }();
    return taps;
}

inline int clampi(int x, int hi) { return x < 0 ? 0 : (x > hi ? hi : x); }

// Separable Gaussian filter with replicate borders.
void conv_replicate(const std::vector<double>& in, int w, int h, std::vector<double>& tmp,
                    std::vector<double>& out) {
    const auto& taps = window_taps();
    tmp.resize(in.size());
    out.resize(in.size());
    for (int v = 0; v < h; ++v) {
        const double* row = in.data() + static_cast<std::size_t>(v) * w;
        double* trow = tmp.data() + static_cast<std::size_t>(v) * w;
        for (int u = 0; u < w; ++u) {
            double acc = 0.0;
            for (int k = -kRadius; k <= kRadius; ++k) {
                acc += taps[k + kRadius] * row[clampi(u + k, w - 1)];
            }
            trow[u] = acc;
        }
    }
    for (int v = 0; v < h; ++v) {
        for (int u = 0; u < w; ++u) {
            double acc = 0.0;
            for (int k = -kRadius; k <= kRadius; ++k) {
                acc += taps[k + kRadius] *
                       tmp[static_cast<std::size_t>(clampi(v + k, h - 1)) * w + u];
            }
            out[static_cast<std::size_t>(v) * w + u] = acc;
        }
    }
}

// Adjoint of conv_replicate: scatter with the same clamped indexing.
void conv_replicate_adjoint(const std::vector<double>& gout, int w, int h,
                            std::vector<double>& tmp, std::vector<double>& gin) {
    const auto& taps = window_taps();
    tmp.assign(gout.size(), 0.0);
    gin.assign(gout.size(), 0.0);
    // adjoint of the vertical pass
    for (int v = 0; v < h; ++v) {
        for (int u = 0; u < w; ++u) {
            const double g = gout[static_cast<std::size_t>(v) * w + u];
            if (g == 0.0) continue;
            for (int k = -kRadius; k <= kRadius; ++k) {
                tmp[static_cast<std::size_t>(clampi(v + k, h - 1)) * w + u] +=
                    taps[k + kRadius] * g;
            }
        }
    }
    // adjoint of the horizontal pass
    for (int v = 0; v < h; ++v) {
        const double* trow = tmp.data() + static_cast<std::size_t>(v) * w;
        double* grow = gin.data() + static_cast<std::size_t>(v) * w;
        for (int u = 0; u < w; ++u) {
            const double g = trow[u];
            if (g == 0.0) continue;
            for (int k = -kRadius; k <= kRadius; ++k) {
                grow[clampi(u + k, w - 1)] += taps[k + kRadius] * g;
            }
        }
    }
}

struct SsimMaps {
    std::vector<double> mx, my, uxx, uyy, uxy;
    int w = 0, h = 0;
};

SsimMaps filtered_maps(const CostImage& a, const CostImage& b) {
    SsimMaps m;
    m.w = a.width;
    m.h = a.height;
    const std::size_t n = a.values.size();
    std::vector<double> prod(n), tmp;
    conv_replicate(a.values, m.w, m.h, tmp, m.mx);
    conv_replicate(b.values, m.w, m.h, tmp, m.my);
    for (std::size_t i = 0; i < n; ++i) prod[i] = a.values[i] * a.values[i];
    conv_replicate(prod, m.w, m.h, tmp, m.uxx);
    for (std::size_t i = 0; i < n; ++i) prod[i] = b.values[i] * b.values[i];
    conv_replicate(prod, m.w, m.h, tmp, m.uyy);
    for (std::size_t i = 0; i < n; ++i) prod[i] = a.values[i] * b.values[i];
    conv_replicate(prod, m.w, m.h, tmp, m.uxy);
    return m;
}

void require_same_size(const CostImage& a, const CostImage& b, const char* who) {
    if (!a.same_size(b)) throw DimensionMismatch(std::string(who) + ": image sizes differ");
    if (a.width < 1 || a.height < 1) throw DimensionMismatch(std::string(who) + ": empty image");
}

}  // namespace

double ssim(const CostImage& a, const CostImage& b) {
    require_same_size(a, b, "ssim");
    const SsimMaps m = filtered_maps(a, b);
    double total = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double mx = m.mx[i], my = m.my[i];
        const double sxx = m.uxx[i] - mx * mx;
        const double syy = m.uyy[i] - my * my;
        const double sxy = m.uxy[i] - mx * my;
        const double a1 = 2.0 * mx * my + kC1;
        const double a2 = 2.0 * sxy + kC2;
        const double b1 = mx * mx + my * my + kC1;
        const double b2 = sxx + syy + kC2;
        total += (a1 * a2) / (b1 * b2);
    }
    return total / static_cast<double>(a.values.size());
}

double loss(const CostImage& rendered, const CostImage& ground_truth) {
    require_same_size(rendered, ground_truth, "loss");
    double l1 = 0.0;
    for (std::size_t i = 0; i < rendered.values.size(); ++i) {
        l1 += std::fabs(rendered.values[i] - ground_truth.values[i]);
    }
    l1 /= static_cast<double>(rendered.values.size());
    return l1 + (1.0 - ssim(rendered, ground_truth));
}

double loss_with_grad(const CostImage& rendered, const CostImage& ground_truth,
                      std::vector<double>& grad_out) {
    require_same_size(rendered, ground_truth, "loss");
    const int w = rendered.width, h = rendered.height;
    const std::size_t n = rendered.values.size();
    const double inv_n = 1.0 / static_cast<double>(n);

    const SsimMaps m = filtered_maps(rendered, ground_truth);

    double l1 = 0.0;
    double ssim_total = 0.0;
    std::vector<double> g_mx(n), g_uxx(n), g_uxy(n);
    for (std::size_t i = 0; i < n; ++i) {
        l1 += std::fabs(rendered.values[i] - ground_truth.values[i]);

        const double mx = m.mx[i], my = m.my[i];
        const double sxx = m.uxx[i] - mx * mx;
        const double syy = m.uyy[i] - my * my;
        const double sxy = m.uxy[i] - mx * my;
        const double a1 = 2.0 * mx * my + kC1;
        const double a2 = 2.0 * sxy + kC2;
        const double b1 = mx * mx + my * my + kC1;
        const double b2 = sxx + syy + kC2;
        const double r = 1.0 / (b1 * b2);
        const double s = a1 * a2 * r;
        ssim_total += s;

        // partials of the per-pixel SSIM w.r.t. the filtered maps
        g_mx[i] = inv_n * (2.0 * my * (a2 - a1) * r - 2.0 * mx * s * (1.0 / b1 - 1.0 / b2));
        g_uxx[i] = inv_n * (-s / b2);
        g_uxy[i] = inv_n * (2.0 * a1 * r);
    }
    l1 *= inv_n;

    std::vector<double> tmp, adj_mx, adj_uxx, adj_uxy;
    conv_replicate_adjoint(g_mx, w, h, tmp, adj_mx);
    conv_replicate_adjoint(g_uxx, w, h, tmp, adj_uxx);
    conv_replicate_adjoint(g_uxy, w, h, tmp, adj_uxy);

    grad_out.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double resid = rendered.values[i] - ground_truth.values[i];
        const double sgn = resid > 0.0 ? 1.0 : (resid < 0.0 ? -1.0 : 0.0);
        const double dssim = adj_mx[i] + 2.0 * rendered.values[i] * adj_uxx[i] +
                             ground_truth.values[i] * adj_uxy[i];
        grad_out[i] = sgn * inv_n - dssim;
    }
    return l1 + (1.0 - ssim_total * inv_n);
}

}  // namespace splatnav
