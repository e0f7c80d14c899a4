// Copyright 2026 splatnav contributors
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <vector>

#include "splatnav/semantics/semantics.hpp"

namespace splatnav {

/// Mean local SSIM over an 11x11 Gaussian window (sigma 1.5), dynamic range 1,
/// C1 = 0.01^2, C2 = 0.03^2. Borders are handled by replicate extension so the
/// map is defined at every pixel. Symmetric in its arguments.
double ssim(const CostImage& a, const CostImage& b);

/// L1 + (1 - SSIM) reconstruction objective. Zero iff the images are identical.
double loss(const CostImage& rendered, const CostImage& ground_truth);

/// Loss and its analytic gradient with respect to the rendered image
/// (row-major, one entry per pixel). The L1 subgradient at exactly zero
/// residual is 0.
double loss_with_grad(const CostImage& rendered, const CostImage& ground_truth,
                      std::vector<double>& grad_out);

}  // namespace splatnav
