// Copyright (c) 2026 the dff authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>

namespace dff::kernels {

/// Row-granular inner loops shared by the contrast, curve-evaluation and
/// solver modules. Two implementations exist: portable scalar reference
/// kernels and AVX2 variants; the active table is chosen once at runtime.
///
/// Equivalence contract (enforced by tests):
///   - elementwise kernels (everything returning void) are bit-identical
///     between variants: each output element is produced by the same
///     floating-point operation sequence, just lane-parallel;
///   - reduction kernels (returning double) may reassociate and agree to a
///     relative tolerance only.
struct KernelOps {
  const char* name;

  // out = a*x + b*y (aliasing with either input allowed)
  void (*axpby)(size_t n, double a, const double* x, double b, const double* y, double* out);
  // out = a*x + b*y + c*z
  void (*lincomb3)(size_t n, double a, const double* x, double b, const double* y, double c,
                   const double* z, double* out);
  // out = x - y
  void (*sub)(size_t n, const double* x, const double* y, double* out);
  // acc += x - y
  void (*accum_sub)(size_t n, const double* x, const double* y, double* acc);

  // gx[j] = d[j+1] - d[j] for j < n-1, gx[n-1] = 0
  void (*forward_diff_row)(size_t n, const double* d, double* gx);
  // x-part of the gradient adjoint, per row (entry n-1 of gx is ignored):
  // out[0] = -gx[0]; out[j] = gx[j-1] - gx[j] for 0 < j < n-1; out[n-1] = gx[n-2]
  void (*adjoint_diff_row)(size_t n, const double* gx, double* out);

  // acc += |row[j-1] - 2*row[j] + row[j+1]| with replicated ends
  void (*abs_sdiff_x_accum)(size_t n, const double* row, double* acc);
  // acc += |up - 2*mid + dn| elementwise (three distinct row pointers)
  void (*abs_sdiff_y_accum)(size_t n, const double* up, const double* mid, const double* dn,
                            double* acc);

  // Isotropic vector shrinkage per pixel: r = hypot-free sqrt(zx^2+zy^2),
  // scale = r > t ? (r-t)/r : 0.
  void (*shrink_row)(size_t n, const double* zx, const double* zy, double t, double* gx,
                     double* gy);

  // coef[q] = coef[q] * scale / (1 + lam*(row_eig + col_eig[q]))
  void (*spectral_scale_row)(size_t n, double scale, double lam, double row_eig,
                             const double* col_eig, double* coef);

  // Chebyshev-series evaluation on [0,1] (t = 2x-1) with per-pixel
  // coefficients stored planar: planes[c][j] is coefficient c of pixel j.
  // x is clamped to [lo, hi] before evaluation. val/dval may be null.
  void (*cheb_eval_row)(size_t n, int ncoef, const double* const* planes, const double* x,
                        double lo, double hi, double* val, double* dval);
  // Same contract in the monomial basis (Horner).
  void (*poly_eval_row)(size_t n, int ncoef, const double* const* planes, const double* x,
                        double lo, double hi, double* val, double* dval);

  // Reductions.
  double (*dot)(size_t n, const double* x, const double* y);
  double (*sum)(size_t n, const double* x);
  double (*sumsq)(size_t n, const double* x);
  double (*sumsq_diff)(size_t n, const double* x, const double* y);
  // sum over j of sqrt(gx[j]^2 + gy[j]^2)
  double (*tv_row)(size_t n, const double* gx, const double* gy);
};

/// Active table: AVX2 when the CPU supports it and DFF_FORCE_SCALAR is not
/// set, otherwise scalar.
const KernelOps& ops();

const KernelOps& scalar_ops();

/// AVX2 table, or nullptr when unsupported by the CPU.
const KernelOps* avx2_ops();

bool cpu_has_avx2();

}  // namespace dff::kernels
