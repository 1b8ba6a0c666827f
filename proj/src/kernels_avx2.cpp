// Copyright (c) 2026 the dff authors
// SPDX-License-Identifier: Apache-2.0
//
// AVX2 kernel variants. Elementwise kernels replicate the scalar reference
// operation order per lane (mul/add/sub only, no FMA), so their outputs are
// bit-identical to kernels_scalar.cpp; reductions keep four lane
// accumulators and agree with the reference to rounding only.

#include "dff/kernels.hpp"

#if defined(__AVX2__) && defined(__x86_64__)

#include <immintrin.h>

#include <cmath>

namespace dff::kernels {
namespace {

inline __m256d abs_pd(__m256d v) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  return _mm256_andnot_pd(sign, v);
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

void axpby(size_t n, double a, const double* x, double b, const double* y, double* out) {
  const __m256d va = _mm256_set1_pd(a), vb = _mm256_set1_pd(b);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d r = _mm256_add_pd(_mm256_mul_pd(va, _mm256_loadu_pd(x + i)),
                              _mm256_mul_pd(vb, _mm256_loadu_pd(y + i)));
    _mm256_storeu_pd(out + i, r);
  }
  for (; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void lincomb3(size_t n, double a, const double* x, double b, const double* y, double c,
              const double* z, double* out) {
  const __m256d va = _mm256_set1_pd(a), vb = _mm256_set1_pd(b), vc = _mm256_set1_pd(c);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d r = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(va, _mm256_loadu_pd(x + i)),
                                            _mm256_mul_pd(vb, _mm256_loadu_pd(y + i))),
                              _mm256_mul_pd(vc, _mm256_loadu_pd(z + i)));
    _mm256_storeu_pd(out + i, r);
  }
  for (; i < n; ++i) out[i] = a * x[i] + b * y[i] + c * z[i];
}

void sub(size_t n, const double* x, const double* y, double* out) {
  size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) out[i] = x[i] - y[i];
}

void accum_sub(size_t n, const double* x, const double* y, double* acc) {
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), d));
  }
  for (; i < n; ++i) acc[i] += x[i] - y[i];
}

void forward_diff_row(size_t n, const double* d, double* gx) {
  size_t j = 0;
  if (n >= 1) {
    for (; j + 5 <= n; j += 4)
      _mm256_storeu_pd(gx + j, _mm256_sub_pd(_mm256_loadu_pd(d + j + 1), _mm256_loadu_pd(d + j)));
    for (; j + 1 < n; ++j) gx[j] = d[j + 1] - d[j];
    gx[n - 1] = 0.0;
  }
}

void adjoint_diff_row(size_t n, const double* gx, double* out) {
  out[0] = -gx[0];
  size_t j = 1;
  for (; j + 5 <= n; j += 4)
    _mm256_storeu_pd(out + j, _mm256_sub_pd(_mm256_loadu_pd(gx + j - 1), _mm256_loadu_pd(gx + j)));
  for (; j + 1 < n; ++j) out[j] = gx[j - 1] - gx[j];
  if (n > 1) out[n - 1] = gx[n - 2];
}

void abs_sdiff_x_accum(size_t n, const double* row, double* acc) {
  if (n == 1) return;
  const __m256d two = _mm256_set1_pd(2.0);
  acc[0] += std::abs(row[1] - row[0]);
  size_t j = 1;
  for (; j + 5 <= n; j += 4) {
    __m256d t = _mm256_sub_pd(_mm256_loadu_pd(row + j - 1),
                              _mm256_mul_pd(two, _mm256_loadu_pd(row + j)));
    t = _mm256_add_pd(t, _mm256_loadu_pd(row + j + 1));
    _mm256_storeu_pd(acc + j, _mm256_add_pd(_mm256_loadu_pd(acc + j), abs_pd(t)));
  }
  for (; j + 1 < n; ++j) acc[j] += std::abs(row[j - 1] - 2.0 * row[j] + row[j + 1]);
  acc[n - 1] += std::abs(row[n - 2] - row[n - 1]);
}

void abs_sdiff_y_accum(size_t n, const double* up, const double* mid, const double* dn,
                       double* acc) {
  const __m256d two = _mm256_set1_pd(2.0);
  size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d t = _mm256_sub_pd(_mm256_loadu_pd(up + j), _mm256_mul_pd(two, _mm256_loadu_pd(mid + j)));
    t = _mm256_add_pd(t, _mm256_loadu_pd(dn + j));
    _mm256_storeu_pd(acc + j, _mm256_add_pd(_mm256_loadu_pd(acc + j), abs_pd(t)));
  }
  for (; j < n; ++j) acc[j] += std::abs(up[j] - 2.0 * mid[j] + dn[j]);
}

void shrink_row(size_t n, const double* zx, const double* zy, double t, double* gx, double* gy) {
  const __m256d vt = _mm256_set1_pd(t);
  const __m256d zero = _mm256_setzero_pd();
  size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d vx = _mm256_loadu_pd(zx + j), vy = _mm256_loadu_pd(zy + j);
    __m256d r = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(vx, vx), _mm256_mul_pd(vy, vy)));
    __m256d q = _mm256_div_pd(_mm256_sub_pd(r, vt), r);
    __m256d mask = _mm256_cmp_pd(r, vt, _CMP_GT_OQ);
    __m256d s = _mm256_blendv_pd(zero, q, mask);
    _mm256_storeu_pd(gx + j, _mm256_mul_pd(vx, s));
    _mm256_storeu_pd(gy + j, _mm256_mul_pd(vy, s));
  }
  for (; j < n; ++j) {
    const double r = std::sqrt(zx[j] * zx[j] + zy[j] * zy[j]);
    double s = 0.0;
    if (r > t) s = (r - t) / r;
    gx[j] = zx[j] * s;
    gy[j] = zy[j] * s;
  }
}

void spectral_scale_row(size_t n, double scale, double lam, double row_eig, const double* col_eig,
                        double* coef) {
  const __m256d vs = _mm256_set1_pd(scale), vl = _mm256_set1_pd(lam), vr = _mm256_set1_pd(row_eig);
  const __m256d one = _mm256_set1_pd(1.0);
  size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d den = _mm256_add_pd(one, _mm256_mul_pd(vl, _mm256_add_pd(vr, _mm256_loadu_pd(col_eig + j))));
    __m256d num = _mm256_mul_pd(_mm256_loadu_pd(coef + j), vs);
    _mm256_storeu_pd(coef + j, _mm256_div_pd(num, den));
  }
  for (; j < n; ++j) coef[j] = coef[j] * scale / (1.0 + lam * (row_eig + col_eig[j]));
}

inline __m256d clamp_pd(__m256d x, __m256d lo, __m256d hi) {
  return _mm256_min_pd(_mm256_max_pd(x, lo), hi);
}

inline double clamp1(double x, double lo, double hi) {
  double t = x < lo ? lo : x;
  return t > hi ? hi : t;
}

void cheb_eval_row(size_t n, int ncoef, const double* const* planes, const double* x, double lo,
                   double hi, double* val, double* dval) {
  const __m256d vlo = _mm256_set1_pd(lo), vhi = _mm256_set1_pd(hi);
  const __m256d one = _mm256_set1_pd(1.0), two = _mm256_set1_pd(2.0);
  size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d xc = clamp_pd(_mm256_loadu_pd(x + j), vlo, vhi);
    __m256d t = _mm256_sub_pd(_mm256_mul_pd(two, xc), one);
    __m256d two_t = _mm256_mul_pd(two, t);
    if (val) {
      __m256d b1 = _mm256_setzero_pd(), b2 = _mm256_setzero_pd();
      for (int c = ncoef - 1; c >= 1; --c) {
        __m256d b0 = _mm256_sub_pd(
            _mm256_add_pd(_mm256_loadu_pd(planes[c] + j), _mm256_mul_pd(two_t, b1)), b2);
        b2 = b1;
        b1 = b0;
      }
      _mm256_storeu_pd(val + j, _mm256_sub_pd(_mm256_add_pd(_mm256_loadu_pd(planes[0] + j),
                                                            _mm256_mul_pd(t, b1)),
                                              b2));
    }
    if (dval) {
      __m256d b1 = _mm256_setzero_pd(), b2 = _mm256_setzero_pd();
      for (int c = ncoef - 1; c >= 1; --c) {
        __m256d ac = _mm256_mul_pd(_mm256_set1_pd(static_cast<double>(c)),
                                   _mm256_loadu_pd(planes[c] + j));
        __m256d b0 = _mm256_sub_pd(_mm256_add_pd(ac, _mm256_mul_pd(two_t, b1)), b2);
        b2 = b1;
        b1 = b0;
      }
      _mm256_storeu_pd(dval + j, _mm256_mul_pd(two, b1));
    }
  }
  for (; j < n; ++j) {
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
  const __m256d vlo = _mm256_set1_pd(lo), vhi = _mm256_set1_pd(hi);
  size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d xc = clamp_pd(_mm256_loadu_pd(x + j), vlo, vhi);
    if (val) {
      __m256d v = _mm256_loadu_pd(planes[ncoef - 1] + j);
      for (int c = ncoef - 2; c >= 0; --c)
        v = _mm256_add_pd(_mm256_mul_pd(v, xc), _mm256_loadu_pd(planes[c] + j));
      _mm256_storeu_pd(val + j, v);
    }
    if (dval) {
      __m256d v = _mm256_setzero_pd();
      if (ncoef > 1) {
        v = _mm256_mul_pd(_mm256_set1_pd(static_cast<double>(ncoef - 1)),
                          _mm256_loadu_pd(planes[ncoef - 1] + j));
        for (int c = ncoef - 2; c >= 1; --c)
          v = _mm256_add_pd(_mm256_mul_pd(v, xc),
                            _mm256_mul_pd(_mm256_set1_pd(static_cast<double>(c)),
                                          _mm256_loadu_pd(planes[c] + j)));
      }
      _mm256_storeu_pd(dval + j, v);
    }
  }
  for (; j < n; ++j) {
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
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sum(size_t n, const double* x) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i];
  return s;
}

double sumsq(size_t n, const double* x) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * x[i];
  return s;
}

double sumsq_diff(size_t n, const double* x, const double* y) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

double tv_row(size_t n, const double* gx, const double* gy) {
  __m256d acc = _mm256_setzero_pd();
  size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d vx = _mm256_loadu_pd(gx + j), vy = _mm256_loadu_pd(gy + j);
    acc = _mm256_add_pd(acc,
                        _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(vx, vx), _mm256_mul_pd(vy, vy))));
  }
  double s = hsum(acc);
  for (; j < n; ++j) s += std::sqrt(gx[j] * gx[j] + gy[j] * gy[j]);
  return s;
}

}  // namespace

const KernelOps* avx2_ops() {
  static const KernelOps table = {
      "avx2",          axpby,      lincomb3,
      sub,             accum_sub,  forward_diff_row,
      adjoint_diff_row, abs_sdiff_x_accum, abs_sdiff_y_accum,
      shrink_row,      spectral_scale_row, cheb_eval_row,
      poly_eval_row,   dot,        sum,
      sumsq,           sumsq_diff, tv_row,
  };
  return cpu_has_avx2() ? &table : nullptr;
}

}  // namespace dff::kernels

#else

namespace dff::kernels {
const KernelOps* avx2_ops() { return nullptr; }
}  // namespace dff::kernels

#endif
