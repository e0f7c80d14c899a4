// Copyright 2026 splatnav contributors
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <cstddef>

namespace splatnav::kernels {

// Data-parallel inner loops shared by the renderer, the field sampler and the
// grid transforms. Every entry has a scalar reference implementation plus
// vector variants selected once at startup; the scalar path is the semantic
// definition and the vector paths are equivalence-tested against it.
//
// The exp-free kernels are bit-identical across variants (same operations,
// no re-association, no FMA); the exp-based kernels agree to a few ulp
// because the vector code uses a polynomial exp.
struct KernelTable {
    const char* name;

    /// out[i] = offset + scale * in[i]
    void (*affine_map)(const double* in, double* out, std::size_t n, double scale,
                       double offset);

    /// out[i] = min(out[i], in[i])
    void (*min_inplace)(double* out, const double* in, std::size_t n);

    /// x[i] = min(1, max(0, x[i]))
    void (*clamp01)(double* x, std::size_t n);

    /// One image row of a projected 2D Gaussian:
    ///   d = (x0 + i - mx, y - my)
    ///   out[i] = amp * exp(-0.5 * (p00*dx*dx + 2*p01*dx*dy + p11*dy*dy))
    void (*gauss_alpha_row)(double* out, std::size_t n, double x0, double y, double mx,
                            double my, double p00, double p01, double p11, double amp);

    /// One voxel row of a 3D Gaussian with a Euclidean skip radius:
    ///   p = (x0 + i*step, y, z), d = p - mu, r2 = d.d
    ///   acc[i] += (r2 <= r2max) ? w * exp(-0.5 * d^T P d) : 0
    /// prec packs the symmetric precision matrix as
    /// (p00, p01, p02, p11, p12, p22).
    void (*gauss_accum_row)(double* acc, std::size_t n, double x0, double step, double y,
                            double z, const double mu[3], const double prec[6], double w,
                            double r2max);

    /// d[i] = d[i] - r_infl * exp(-d[i]^2 * inv_two_sigma2)
    void (*soft_inflate)(double* d, std::size_t n, double r_infl, double inv_two_sigma2);
};

const KernelTable& scalar_kernels();

#if defined(__x86_64__) || defined(_M_X64)
const KernelTable& avx2_kernels();
bool avx2_supported();
#endif
#if defined(__aarch64__)
const KernelTable& neon_kernels();
#endif

/// The table picked at startup: SPLATNAV_KERNELS=scalar|avx2|neon|auto
/// (default auto). Unsupported requests fall back to scalar.
const KernelTable& active_kernels();

}  // namespace splatnav::kernels
