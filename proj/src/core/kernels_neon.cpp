// Copyright 2026 splatnav contributors
// Licensed under the Apache License, Version 2.0.

#if defined(__aarch64__)

#include <arm_neon.h>

#include <algorithm>
#include <cmath>

#include "splatnav/core/kernels.hpp"

namespace splatnav::kernels {
namespace {

// Same Cephes-style exp as the AVX2 variant, two lanes of double.
inline float64x2_t exp_f64(float64x2_t x) {
    const float64x2_t log2e = vdupq_n_f64(1.4426950408889634073599);
    const float64x2_t c1 = vdupq_n_f64(6.93145751953125e-1);
    const float64x2_t c2 = vdupq_n_f64(1.42860682030941723212e-6);
    const float64x2_t lo = vdupq_n_f64(-690.0);

    float64x2_t xc = vminq_f64(vmaxq_f64(x, lo), vdupq_n_f64(700.0));
    const float64x2_t nf = vrndnq_f64(vmulq_f64(xc, log2e));
    float64x2_t r = vfmsq_f64(xc, nf, c1);  // xc - nf*c1
    r = vfmsq_f64(r, nf, c2);

    const float64x2_t rr = vmulq_f64(r, r);
    float64x2_t px = vfmaq_f64(vdupq_n_f64(3.02994407707441961300e-2),
                               vdupq_n_f64(1.26177193074810590878e-4), rr);
    px = vfmaq_f64(vdupq_n_f64(9.99999999999999999910e-1), px, rr);
    px = vmulq_f64(px, r);
    float64x2_t qx = vfmaq_f64(vdupq_n_f64(2.52448340349684104192e-3),
                               vdupq_n_f64(3.00198505138664455042e-6), rr);
    qx = vfmaq_f64(vdupq_n_f64(2.27265548208155028766e-1), qx, rr);
    qx = vfmaq_f64(vdupq_n_f64(2.00000000000000000005e0), qx, rr);

    const float64x2_t e = vdivq_f64(px, vsubq_f64(qx, px));
    float64x2_t res = vfmaq_f64(vdupq_n_f64(1.0), vdupq_n_f64(2.0), e);

    const int64x2_t n64 = vcvtnq_s64_f64(nf);
    const int64x2_t pow2 = vshlq_n_s64(vaddq_s64(n64, vdupq_n_s64(1023)), 52);
    res = vmulq_f64(res, vreinterpretq_f64_s64(pow2));

    const uint64x2_t alive = vcgeq_f64(x, lo);
    return vreinterpretq_f64_u64(
        vandq_u64(vreinterpretq_u64_f64(res), alive));
}

void affine_map_neon(const double* in, double* out, std::size_t n, double scale,
                     double offset) {
    const float64x2_t sc = vdupq_n_f64(scale);
    const float64x2_t off = vdupq_n_f64(offset);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(out + i, vaddq_f64(off, vmulq_f64(sc, vld1q_f64(in + i))));
    }
    for (; i < n; ++i) out[i] = offset + scale * in[i];
}

void min_inplace_neon(double* out, const double* in, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(out + i, vminq_f64(vld1q_f64(out + i), vld1q_f64(in + i)));
    }
    for (; i < n; ++i) out[i] = std::min(out[i], in[i]);
}

void clamp01_neon(double* x, std::size_t n) {
    const float64x2_t zero = vdupq_n_f64(0.0);
    const float64x2_t one = vdupq_n_f64(1.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(x + i, vminq_f64(one, vmaxq_f64(zero, vld1q_f64(x + i))));
    }
    for (; i < n; ++i) x[i] = std::min(1.0, std::max(0.0, x[i]));
}

void gauss_alpha_row_neon(double* out, std::size_t n, double x0, double y, double mx,
                          double my, double p00, double p01, double p11, double amp) {
    const double dy = y - my;
    const double cy = p11 * dy * dy;
    const double bxy = 2.0 * p01 * dy;

    const float64x2_t mxv = vdupq_n_f64(mx);
    const float64x2_t p00v = vdupq_n_f64(p00);
    const float64x2_t bv = vdupq_n_f64(bxy);
    const float64x2_t cv = vdupq_n_f64(cy);
    const float64x2_t ampv = vdupq_n_f64(amp);
    const float64x2_t nhalf = vdupq_n_f64(-0.5);
    const float64x2_t lane = {0.0, 1.0};

    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t xs = vaddq_f64(vdupq_n_f64(x0 + static_cast<double>(i)), lane);
        const float64x2_t dx = vsubq_f64(xs, mxv);
        float64x2_t q = vmulq_f64(vmulq_f64(p00v, dx), dx);
        q = vaddq_f64(q, vmulq_f64(bv, dx));
        q = vaddq_f64(q, cv);
        vst1q_f64(out + i, vmulq_f64(ampv, exp_f64(vmulq_f64(nhalf, q))));
    }
    for (; i < n; ++i) {
        const double dx = (x0 + static_cast<double>(i)) - mx;
        const double q = p00 * dx * dx + bxy * dx + cy;
        out[i] = amp * std::exp(-0.5 * q);
    }
}

void gauss_accum_row_neon(double* acc, std::size_t n, double x0, double step, double y,
                          double z, const double mu[3], const double prec[6], double w,
                          double r2max) {
    const double dy = y - mu[1];
    const double dz = z - mu[2];
    const double qyz = prec[3] * dy * dy + 2.0 * prec[4] * dy * dz + prec[5] * dz * dz;
    const double ryz = dy * dy + dz * dz;
    const double bx = 2.0 * (prec[1] * dy + prec[2] * dz);

    const float64x2_t mu0 = vdupq_n_f64(mu[0]);
    const float64x2_t stepv = vdupq_n_f64(step);
    const float64x2_t p00v = vdupq_n_f64(prec[0]);
    const float64x2_t bxv = vdupq_n_f64(bx);
    const float64x2_t qyzv = vdupq_n_f64(qyz);
    const float64x2_t ryzv = vdupq_n_f64(ryz);
    const float64x2_t r2maxv = vdupq_n_f64(r2max);
    const float64x2_t wv = vdupq_n_f64(w);
    const float64x2_t x0v = vdupq_n_f64(x0);
    const float64x2_t nhalf = vdupq_n_f64(-0.5);
    const float64x2_t lane = {0.0, 1.0};

    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t idx = vaddq_f64(vdupq_n_f64(static_cast<double>(i)), lane);
        const float64x2_t xs = vaddq_f64(x0v, vmulq_f64(idx, stepv));
        const float64x2_t dx = vsubq_f64(xs, mu0);
        const float64x2_t dx2 = vmulq_f64(dx, dx);
        const float64x2_t r2 = vaddq_f64(dx2, ryzv);
        const uint64x2_t keep = vcleq_f64(r2, r2maxv);
        if (vgetq_lane_u64(keep, 0) == 0 && vgetq_lane_u64(keep, 1) == 0) continue;

        float64x2_t q = vmulq_f64(p00v, dx2);
        q = vaddq_f64(q, vmulq_f64(bxv, dx));
        q = vaddq_f64(q, qyzv);
        const float64x2_t g = vmulq_f64(wv, exp_f64(vmulq_f64(nhalf, q)));
        const float64x2_t masked = vreinterpretq_f64_u64(
            vandq_u64(vreinterpretq_u64_f64(g), keep));
        vst1q_f64(acc + i, vaddq_f64(vld1q_f64(acc + i), masked));
    }
    for (; i < n; ++i) {
        const double dx = (x0 + static_cast<double>(i) * step) - mu[0];
        const double r2 = dx * dx + ryz;
        if (r2 > r2max) continue;
        const double q = prec[0] * dx * dx + 2.0 * (prec[1] * dy + prec[2] * dz) * dx + qyz;
        acc[i] += w * std::exp(-0.5 * q);
    }
}

void soft_inflate_neon(double* d, std::size_t n, double r_infl, double inv_two_sigma2) {
    const float64x2_t rv = vdupq_n_f64(r_infl);
    const float64x2_t sv = vdupq_n_f64(inv_two_sigma2);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t v = vld1q_f64(d + i);
        const float64x2_t arg = vmulq_f64(vmulq_f64(vnegq_f64(v), v), sv);
        vst1q_f64(d + i, vsubq_f64(v, vmulq_f64(rv, exp_f64(arg))));
    }
    for (; i < n; ++i) d[i] = d[i] - r_infl * std::exp(-d[i] * d[i] * inv_two_sigma2);
}

}  // namespace

const KernelTable& neon_kernels() {
    static const KernelTable table{
        "neon",          affine_map_neon,     min_inplace_neon, clamp01_neon,
        gauss_alpha_row_neon, gauss_accum_row_neon, soft_inflate_neon,
    };
    return table;
}

}  // namespace splatnav::kernels

#endif  // __aarch64__
