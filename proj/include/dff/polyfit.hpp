// Copyright (c) 2026 the dff authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "dff/contrast.hpp"
#include "dff/field.hpp"

namespace dff {

enum class CurveBasis { Monomial, Chebyshev01 };

/// Per-pixel smooth contrast curves c(x) over the focus coordinate
/// x in [0,1]: one coefficient vector per pixel, stored planar (plane c
/// holds coefficient c of every pixel) so row-wise evaluation kernels can
/// stream them.
struct ContrastCurveField {
  int degree = 0;
  CurveBasis basis = CurveBasis::Chebyshev01;
  std::vector<Field2D> coeffs;  // degree+1 planes

  int rows() const { return coeffs.empty() ? 0 : coeffs[0].rows(); }
  int cols() const { return coeffs.empty() ? 0 : coeffs[0].cols(); }

  /// c(x) and c'(x) for every pixel of one row, x clamped to [lo, hi].
  /// Either output may be null.
  void eval_row(int i, const double* x, double lo, double hi, double* val, double* dval) const;
};

/// Least-squares fit of a degree-`degree` polynomial (default 8) to every
/// pixel's contrast samples at the given strictly increasing focus
/// positions. One shared design-matrix factorization serves all pixels.
/// Throws Underdetermined when slices < degree+1 and IllConditionedFit
/// when the design matrix condition estimate exceeds 1e12.
ContrastCurveField fit_curves(const ContrastVolume& volume, const std::vector<double>& positions,
                              int degree = 8);

/// Pointwise evaluation (no clamping; x may lie slightly outside [0,1]).
double eval_curve(const ContrastCurveField& field, int i, int j, double x);
double eval_curve_derivative(const ContrastCurveField& field, int i, int j, double x);

/// Binary round-trip of a coefficient field (header: dims, degree, basis
/// tag; then row-major coefficient vectors).
void dump_curves(const ContrastCurveField& field, const std::string& path);
ContrastCurveField load_curves(const std::string& path);

}  // namespace dff
