// Copyright 2026 splatnav contributors
// Licensed under the Apache License, Version 2.0.

#include <cstdlib>
#include <string>

#include "splatnav/core/kernels.hpp"

namespace splatnav::kernels {

const KernelTable& active_kernels() {
    static const KernelTable* table = [] {
        const char* env = std::getenv("SPLATNAV_KERNELS");
        const std::string want = env ? env : "auto";
        if (want == "scalar") return &scalar_kernels();
#if defined(__x86_64__) || defined(_M_X64)
        if ((want == "avx2" || want == "auto") && avx2_supported()) return &avx2_kernels();
#endif
#if defined(__aarch64__)
        if (want == "neon" || want == "auto") return &neon_kernels();
#endif
        return &scalar_kernels();
    }();
    return *table;
}

}  // namespace splatnav::kernels
