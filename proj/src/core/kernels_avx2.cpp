// Copyright 2026 splatnav contributors
// Licensed under the Apache License, Version 2.0.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "splatnav/core/kernels.hpp"

namespace splatnav::kernels {
namespace {

// exp(x) on 4 lanes, Cephes-style rational approximation (~2 ulp).
// Arguments here are never above ~0; inputs below -690 flush to zero.
inline __m256d exp_pd(__m256d x) {
    const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
    const __m256d c1 = _mm256_set1_pd(6.93145751953125e-1);
    const __m256d c2 = _mm256_set1_pd(1.42860682030941723212e-6);
    const __m256d p0 = _mm256_set1_pd(1.26177193074810590878e-4);
    const __m256d p1 = _mm256_set1_pd(3.02994407707441961300e-2);
    const __m256d p2 = _mm256_set1_pd(9.99999999999999999910e-1);
    const __m256d q0 = _mm256_set1_pd(3.00198505138664455042e-6);
    const __m256d q1 = _mm256_set1_pd(2.52448340349684104192e-3);
    const __m256d q2 = _mm256_set1_pd(2.27265548208155028766e-1);
    const __m256d q3 = _mm256_set1_pd(2.00000000000000000005e0);

    const __m256d lo = _mm256_set1_pd(-690.0);
    __m256d xc = _mm256_min_pd(_mm256_max_pd(x, lo), _mm256_set1_pd(700.0));

    __m256d nf = _mm256_round_pd(_mm256_mul_pd(xc, log2e),
                                 _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(nf, c1, xc);
    r = _mm256_fnmadd_pd(nf, c2, r);

    const __m256d rr = _mm256_mul_pd(r, r);
    __m256d px = _mm256_fmadd_pd(p0, rr, p1);
    px = _mm256_fmadd_pd(px, rr, p2);
    px = _mm256_mul_pd(px, r);
    __m256d qx = _mm256_fmadd_pd(q0, rr, q1);
    qx = _mm256_fmadd_pd(qx, rr, q2);
    qx = _mm256_fmadd_pd(qx, rr, q3);

    const __m256d e = _mm256_div_pd(px, _mm256_sub_pd(qx, px));
    __m256d res = _mm256_fmadd_pd(_mm256_set1_pd(2.0), e, _mm256_set1_pd(1.0));

    const __m128i n32 = _mm256_cvtpd_epi32(nf);
    const __m256i n64 = _mm256_cvtepi32_epi64(n32);
    const __m256i pow2 =
        _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
    res = _mm256_mul_pd(res, _mm256_castsi256_pd(pow2));

    const __m256d alive = _mm256_cmp_pd(x, lo, _CMP_GE_OQ);
    return _mm256_and_pd(res, alive);
}

inline __m256d lane_offsets(double x0) {
    return _mm256_add_pd(_mm256_set1_pd(x0), _mm256_setr_pd(0.0, 1.0, 2.0, 3.0));
}

void affine_map_avx2(const double* in, double* out, std::size_t n, double scale,
                     double offset) {
    const __m256d sc = _mm256_set1_pd(scale);
    const __m256d off = _mm256_set1_pd(offset);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(in + i);
        _mm256_storeu_pd(out + i, _mm256_add_pd(off, _mm256_mul_pd(sc, v)));
    }
    for (; i < n; ++i) out[i] = offset + scale * in[i];
}

void min_inplace_avx2(double* out, const double* in, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a = _mm256_loadu_pd(out + i);
        const __m256d b = _mm256_loadu_pd(in + i);
        _mm256_storeu_pd(out + i, _mm256_min_pd(a, b));
    }
    for (; i < n; ++i) out[i] = std::min(out[i], in[i]);
}

void clamp01_avx2(double* x, std::size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(x + i, _mm256_min_pd(one, _mm256_max_pd(zero, v)));
    }
    for (; i < n; ++i) x[i] = std::min(1.0, std::max(0.0, x[i]));
}

void gauss_alpha_row_avx2(double* out, std::size_t n, double x0, double y, double mx,
                          double my, double p00, double p01, double p11, double amp) {
    const double dy = y - my;
    const double cy = p11 * dy * dy;
    const double bxy = 2.0 * p01 * dy;  // q = p00*dx^2 + bxy*dx + cy

    const __m256d mxv = _mm256_set1_pd(mx);
    const __m256d p00v = _mm256_set1_pd(p00);
    const __m256d bv = _mm256_set1_pd(bxy);
    const __m256d cv = _mm256_set1_pd(cy);
    const __m256d ampv = _mm256_set1_pd(amp);
    const __m256d half = _mm256_set1_pd(-0.5);

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xs = lane_offsets(x0 + static_cast<double>(i));
        const __m256d dx = _mm256_sub_pd(xs, mxv);
        __m256d q = _mm256_mul_pd(_mm256_mul_pd(p00v, dx), dx);
        q = _mm256_add_pd(q, _mm256_mul_pd(bv, dx));
        q = _mm256_add_pd(q, cv);
        _mm256_storeu_pd(out + i, _mm256_mul_pd(ampv, exp_pd(_mm256_mul_pd(half, q))));
    }
    for (; i < n; ++i) {
        const double dx = (x0 + static_cast<double>(i)) - mx;
        const double q = p00 * dx * dx + bxy * dx + cy;
        out[i] = amp * std::exp(-0.5 * q);
    }
}

void gauss_accum_row_avx2(double* acc, std::size_t n, double x0, double step, double y,
                          double z, const double mu[3], const double prec[6], double w,
                          double r2max) {
    const double dy = y - mu[1];
    const double dz = z - mu[2];
    const double qyz = prec[3] * dy * dy + 2.0 * prec[4] * dy * dz + prec[5] * dz * dz;
    const double ryz = dy * dy + dz * dz;
    const double bx = 2.0 * (prec[1] * dy + prec[2] * dz);

    const __m256d mu0 = _mm256_set1_pd(mu[0]);
    const __m256d stepv = _mm256_set1_pd(step);
    const __m256d p00v = _mm256_set1_pd(prec[0]);
    const __m256d bxv = _mm256_set1_pd(bx);
    const __m256d qyzv = _mm256_set1_pd(qyz);
    const __m256d ryzv = _mm256_set1_pd(ryz);
    const __m256d r2maxv = _mm256_set1_pd(r2max);
    const __m256d wv = _mm256_set1_pd(w);
    const __m256d x0v = _mm256_set1_pd(x0);
    const __m256d half = _mm256_set1_pd(-0.5);

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d idx = _mm256_add_pd(_mm256_set1_pd(static_cast<double>(i)),
                                          _mm256_setr_pd(0.0, 1.0, 2.0, 3.0));
        const __m256d xs = _mm256_add_pd(x0v, _mm256_mul_pd(idx, stepv));
        const __m256d dx = _mm256_sub_pd(xs, mu0);
        const __m256d dx2 = _mm256_mul_pd(dx, dx);
        const __m256d r2 = _mm256_add_pd(dx2, ryzv);
        const __m256d keep = _mm256_cmp_pd(r2, r2maxv, _CMP_LE_OQ);
        if (_mm256_testz_pd(keep, keep)) continue;

        __m256d q = _mm256_mul_pd(p00v, dx2);
        q = _mm256_add_pd(q, _mm256_mul_pd(bxv, dx));
        q = _mm256_add_pd(q, qyzv);
        const __m256d g = _mm256_mul_pd(wv, exp_pd(_mm256_mul_pd(half, q)));
        const __m256d cur = _mm256_loadu_pd(acc + i);
        _mm256_storeu_pd(acc + i, _mm256_add_pd(cur, _mm256_and_pd(g, keep)));
    }
    for (; i < n; ++i) {
        const double dx = (x0 + static_cast<double>(i) * step) - mu[0];
        const double r2 = dx * dx + ryz;
        if (r2 > r2max) continue;
        const double q = prec[0] * dx * dx + 2.0 * (prec[1] * dy + prec[2] * dz) * dx + qyz;
        acc[i] += w * std::exp(-0.5 * q);
    }
}

void soft_inflate_avx2(double* d, std::size_t n, double r_infl, double inv_two_sigma2) {
    const __m256d rv = _mm256_set1_pd(r_infl);
    const __m256d sv = _mm256_set1_pd(inv_two_sigma2);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(d + i);
        const __m256d arg =
            _mm256_mul_pd(_mm256_mul_pd(_mm256_sub_pd(_mm256_setzero_pd(), v), v), sv);
        _mm256_storeu_pd(d + i, _mm256_sub_pd(v, _mm256_mul_pd(rv, exp_pd(arg))));
    }
    for (; i < n; ++i) d[i] = d[i] - r_infl * std::exp(-d[i] * d[i] * inv_two_sigma2);
}

}  // namespace

bool avx2_supported() { return __builtin_cpu_supports("avx2") != 0; }

const KernelTable& avx2_kernels() {
    static const KernelTable table{
        "avx2",          affine_map_avx2,     min_inplace_avx2, clamp01_avx2,
        gauss_alpha_row_avx2, gauss_accum_row_avx2, soft_inflate_avx2,
    };
    return table;
}

}  // namespace splatnav::kernels

#endif  // x86_64
