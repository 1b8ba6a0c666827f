// Copyright (c) 2026 the dff authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>

#include "dff/kernels.hpp"

namespace dff::kernels {

bool cpu_has_avx2() {
#if defined(__x86_64__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelOps& ops() {
  static const KernelOps& selected = []() -> const KernelOps& {
    if (std::getenv("DFF_FORCE_SCALAR")) return scalar_ops();
    if (const KernelOps* v = avx2_ops()) return *v;
    return scalar_ops();
  }();
  return selected;
}

}  // namespace dff::kernels
