// Copyright (c) 2026 the dff authors
// SPDX-License-Identifier: Apache-2.0
//
// Reference kernels. Plain loops, one element at a time; the AVX2 variants
// in kernels_avx2.cpp must replicate the per-element operation order of
// these exactly (elementwise kernels are compared bit-for-bit in tests).

#include <cmath>

#include "dff/kernels.hpp"

namespace dff::kernels {
namespace {

void axpby(size_t n, double a, const double* x, double b, const double* y, double* out) {
  for (size_t i = 0; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void lincomb3(size_t n, double a, const double* x, double b, const double* y, double c,
              const double* z, double* out) {
  for (size_t i = 0; i < n; ++i) out[i] = a * x[i] + b * y[i] + c * z[i];
}

void sub(size_t n, const double* x, const double* y, double* out) {
  for (size_t i = 0; i < n; ++i) out[i] = x[i] - y[i];
}

void accum_sub(size_t n, const double* x, const double* y, double* acc) {
  for (size_t i = 0; i < n; ++i) acc[i] += x[i] - y[i];
}

void forward_diff_row(size_t n, const double* d, double* gx) {
  for (size_t j = 0; j + 1 < n; ++j) gx[j] = d[j + 1] - d[j];
  gx[n - 1] = 0.0;
}

void adjoint_diff_row(size_t n, const double* gx, double* out) {
  out[0] = -gx[0];
  for (size_t j = 1; j + 1 < n; ++j) out[j] = gx[j - 1] - gx[j];
  if (n > 1) out[n - 1] = gx[n - 2];
}

void abs_sdiff_x_accum(size_t n, const double* row, double* acc) {
  if (n == 1) return;  // replicated ends make the stencil vanish
  acc[0] += std::abs(row[1] - row[0]);
  for (size_t j = 1; j + 1 < n; ++j) acc[j] += std::abs(row[j - 1] - 2.0 * row[j] + row[j + 1]);
  acc[n - 1] += std::abs(row[n - 2] - row[n - 1]);
}

void abs_sdiff_y_accum(size_t n, const double* up, const double* mid, const double* dn,
                       double* acc) {
  for (size_t j = 0; j < n; ++j) acc[j] += std::abs(up[j] - 2.0 * mid[j] + dn[j]);
}

void shrink_row(size_t n, const double* zx, const double* zy, double t, double* gx, double* gy) {
  for (size_t j = 0; j < n; ++j) {
    const double r = std::sqrt(zx[j] * zx[j] + zy[j] * zy[j]);
    double s = 0.0;
    if (r > t) s = (r - t) / r;
    gx[j] = zx[j] * s;
    gy[j] = zy[j] * s;
  }
}

void spectral_scale_row(size_t n, double scale, double lam, double row_eig, const double* col_eig,
                        double* coef) {
  for (size_t j = 0; j < n; ++j) coef[j] = coef[j] * scale / (1.0 + lam * (row_eig + col_eig[j]));
}

inline double clamp1(double x, double lo, double hi) {
  double t = x < lo ? lo : x;
  return t > hi ? hi : t;
}

// Clenshaw on T_k for the value and on U_k for the derivative; both share
// the mapped argument t = 2x - 1, so d/dx = 2 d/dt.
void cheb_eval_row(size_t n, int ncoef, const double* const* planes, const double* x, double lo,
                   double hi, double* val, double* dval) {
  for (size_t j = 0; j < n; ++j) {
    const double t = 2.0 * clamp1(x[j], lo, hi) - 1.0;
    const double two_t = 2.0 * t;
    if (val) {
      double b1 = 0.0, b2 = 0.0;
      for (int c = ncoef - 1; c >= 1; --c) {
        double b0 = planes[c][j] + two_t * b1 - b2;
        b2 = b1;
        b1 = b0;
      }
      val[j] = planes[0][j] + t * b1 - b2;
    }
    if (dval) {
      double b1 = 0.0, b2 = 0.0;
      for (int c = ncoef - 1; c >= 1; --c) {
        double b0 = static_cast<double>(c) * planes[c][j] + two_t * b1 - b2;
        b2 = b1;
        b1 = b0;
      }
      dval[j] = 2.0 * b1;
    }
  }
}

void poly_eval_row(size_t n, int ncoef, const double* const* planes, const double* x, double lo,
                   double hi, double* val, double* dval) {
  for (size_t j = 0; j < n; ++j) {
    const double xc = clamp1(x[j], lo, hi);
    if (val) {
      double v = planes[ncoef - 1][j];
      for (int c = ncoef - 2; c >= 0; --c) v = v * xc + planes[c][j];
      val[j] = v;
    }
    if (dval) {
      double v = 0.0;
      if (ncoef > 1) {
        v = static_cast<double>(ncoef - 1) * planes[ncoef - 1][j];
        for (int c = ncoef - 2; c >= 1; --c) v = v * xc + static_cast<double>(c) * planes[c][j];
      }
      dval[j] = v;
    }
  }
}

double dot(size_t n, const double* x, const double* y) {
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sum(size_t n, const double* x) {
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

double sumsq(size_t n, const double* x) {
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += x[i] * x[i];
  return s;
}

double sumsq_diff(size_t n, const double* x, const double* y) {
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

double tv_row(size_t n, const double* gx, const double* gy) {
  double s = 0.0;
  for (size_t j = 0; j < n; ++j) s += std::sqrt(gx[j] * gx[j] + gy[j] * gy[j]);
  return s;
}

}  // namespace

const KernelOps& scalar_ops() {
  static const KernelOps table = {
      "scalar",        axpby,      lincomb3,
      sub,             accum_sub,  forward_diff_row,
      adjoint_diff_row, abs_sdiff_x_accum, abs_sdiff_y_accum,
      shrink_row,      spectral_scale_row, cheb_eval_row,
      poly_eval_row,   dot,        sum,
      sumsq,           sumsq_diff, tv_row,
  };
  return table;
}

}  // namespace dff::kernels
