// Copyright 2026 splatnav contributors
// Licensed under the Apache License, Version 2.0.

#include <algorithm>
#include <cmath>

#include "splatnav/core/kernels.hpp"

namespace splatnav::kernels {
namespace {

void affine_map_scalar(const double* in, double* out, std::size_t n, double scale,
                       double offset) {
    for (std::size_t i = 0; i < n; ++i) out[i] = offset + scale * in[i];
}

void min_inplace_scalar(double* out, const double* in, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::min(out[i], in[i]);
}

void clamp01_scalar(double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] = std::min(1.0, std::max(0.0, x[i]));
}

void gauss_alpha_row_scalar(double* out, std::size_t n, double x0, double y, double mx,
                            double my, double p00, double p01, double p11, double amp) {
    const double dy = y - my;
    const double cy = p11 * dy * dy;
    const double bxy = 2.0 * p01 * dy;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = (x0 + static_cast<double>(i)) - mx;
        const double q = p00 * dx * dx + bxy * dx + cy;
        out[i] = amp * std::exp(-0.5 * q);
    }
}

void gauss_accum_row_scalar(double* acc, std::size_t n, double x0, double step, double y,
                            double z, const double mu[3], const double prec[6], double w,
                            double r2max) {
    const double dy = y - mu[1];
    const double dz = z - mu[2];
    const double qyz = prec[3] * dy * dy + 2.0 * prec[4] * dy * dz + prec[5] * dz * dz;
    const double ryz = dy * dy + dz * dz;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = (x0 + static_cast<double>(i) * step) - mu[0];
        const double r2 = dx * dx + ryz;
        if (r2 > r2max) continue;
        const double q = prec[0] * dx * dx + 2.0 * (prec[1] * dy + prec[2] * dz) * dx + qyz;
        acc[i] += w * std::exp(-0.5 * q);
    }
}

void soft_inflate_scalar(double* d, std::size_t n, double r_infl, double inv_two_sigma2) {
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = d[i] - r_infl * std::exp(-d[i] * d[i] * inv_two_sigma2);
    }
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{
        "scalar",          affine_map_scalar,     min_inplace_scalar, clamp01_scalar,
        gauss_alpha_row_scalar, gauss_accum_row_scalar, soft_inflate_scalar,
    };
    return table;
}

}  // namespace splatnav::kernels
