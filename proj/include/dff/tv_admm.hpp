// Copyright (c) 2026 the dff authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>
#include <vector>

#include "dff/dct.hpp"
#include "dff/field.hpp"
#include "dff/image.hpp"
#include "dff/polyfit.hpp"

namespace dff {

/// Parameters of the variational depth solver, which minimizes
///   E(d) = -sum_ij c_ij(d_ij) + alpha * ||Kd||_{2,1}
/// by alternating a transform-domain quadratic solve on a linearization of
/// the data term, isotropic shrinkage of the split gradient variable, and a
/// scaled dual ascent with geometric penalty growth.
///
/// alpha and tau follow the slice-index depth convention the reported
/// values use (a depth step of one slice has magnitude 1). solve() converts
/// them to normalized focus coordinates with normalized_for(); the
/// conversion d -> d/(S-1) maps (alpha, tau) to (alpha*(S-1), tau/(S-1)^2)
/// and leaves the iteration otherwise identical.
struct SolverConfig {
  double alpha = 0.25;          // regularization weight
  double tau = 8.0;             // step size of the data-term linearization
  double lambda0 = 1.0;         // initial penalty
  double lambda_growth = 1.02;  // per-iteration penalty factor
  int iterations = 400;
  double clamp_lo = 0.0;  // curve-evaluation clamp for out-of-range depths
  double clamp_hi = 1.0;
  double lambda_cap = 1e6;  // growth stops here to keep the spectral divisors sane

  int fit_degree = 8;            // contrast-curve polynomial degree
  int init_contrast_window = 15; // contrast filter for the initial estimate
  int init_blur_window = 21;     // mean blur applied to the initial estimate
  // solve() rescales the contrast volume so its 99th percentile hits this
  // value before fitting curves; 0 disables and uses the raw scale. Keeps
  // the linearization step stable and alpha transferable across inputs
  // whose absolute sharpness differs by a global factor.
  double contrast_target = 0.8;

  /// Re-expresses alpha and tau for depth normalized to [0,1] given the
  /// slice count of the stack.
  SolverConfig normalized_for(int slice_count) const;

  void validate() const;
};

struct SolverState {
  DepthMap d;
  GradientField g;
  GradientField b;  // scaled dual variable
  double lambda = 1.0;
  int k = 0;
};

struct IterationRecord {
  int iteration;
  double energy;
  double iterate_change_sq;   // ||d+ - d||^2 + ||g+ - g||^2
  double split_residual_sq;   // ||Kd - g||^2 at the end of the iteration
  double cross_residual_sq;   // ||K d_new - g_old||^2 (convex-mode rate quantity)
  double lambda;
};

using Diagnostics = std::vector<IterationRecord>;

/// Forward differences: gx(i,j) = d(i,j+1) - d(i,j) (zero on the last
/// column), gy analogous along rows.
GradientField grad(const DepthMap& d);

/// K^T g, the exact adjoint: <Kd, g> == <d, grad_adjoint(g)> for all d, g.
/// (The negative of the usual discrete divergence.)
Field2D grad_adjoint(const GradientField& g);

/// Isotropic total variation: sum over pixels of sqrt(gx^2 + gy^2).
double tv_energy(const DepthMap& d);

/// Negative summed contrast at clamped depth arguments.
double data_energy(const DepthMap& d, const ContrastCurveField& curves, double clamp_lo,
                   double clamp_hi);

/// Gradient of data_energy: per pixel, -c'(clamp(d)); the derivative is
/// evaluated at the clamped argument so out-of-range iterates see the
/// boundary slope.
Field2D grad_data(const DepthMap& d, const ContrastCurveField& curves, double clamp_lo,
                  double clamp_hi);

/// Isotropic soft shrinkage: per pixel the vector (zx,zy) scaled by
/// max(||z|| - threshold, 0)/||z||; zero stays zero. Throws
/// InvalidThreshold for negative thresholds.
GradientField shrink_iso(const GradientField& z, double threshold);

/// One solver iteration, in place:
///   1. d <- (lambda K^T K + I)^{-1} (lambda K^T(g - b) + d - tau grad_data(d))
///   2. g <- shrink_iso(Kd + b, alpha tau / lambda)
///   3. b <- b + Kd - g
///   4. lambda <- lambda*growth, b <- b/growth (capped at lambda_cap)
/// Throws DivergenceDetected when an iterate stops being finite.
IterationRecord admm_step(SolverState& state, const ContrastCurveField& curves,
                          const SolverConfig& config, DctSolver& dct);

/// Builds the initial depth estimate the solver starts from: refined argmax
/// of the window-filtered contrast, then mean-blurred.
DepthMap initial_depth(const ContrastVolume& volume, const std::vector<double>& positions,
                       const SolverConfig& config);

/// Full pipeline from a focal stack: contrast, curve fitting,
/// initialization, then config.iterations solver steps. The returned depth
/// is clamped to [0,1].
std::pair<DepthMap, Diagnostics> solve(const FocalStack& stack, const SolverConfig& config);

/// Solver loop from prefitted curves and an explicit initial estimate
/// (the depth result is clamped to [clamp_lo, clamp_hi] at output).
std::pair<DepthMap, Diagnostics> solve_from_curves(const ContrastCurveField& curves,
                                                   const DepthMap& init,
                                                   const SolverConfig& config);

/// Convex-mode rate verification: runs the identical iteration on
/// user-supplied concave per-pixel parabolas (degree-2 monomial curves), a
/// fixed penalty (growth must be 1) and no clamping, against a
/// high-accuracy reference solution from a 10x-iteration run. Tracks the
/// scaled residual sequences whose boundedness the convex theory predicts.
struct ConvexModeReport {
  bool hypothesis_ok = true;      // tau * max curvature <= 1
  double tau_curvature = 0.0;     // tau * L
  std::vector<double> k_bregman;  // k * (S_D(d^k, d_ref) + alpha S_R(g^k, K d_ref))
  std::vector<double> k_cross_residual;  // k * ||K d^{k+1} - g^k||^2
  double slope_bregman = 0.0;     // log-log trend over k in [10, end]
  double slope_cross_residual = 0.0;
  DepthMap d_final;
  DepthMap d_reference;
};

ConvexModeReport solve_convex_mode(const ContrastCurveField& quadratic_curves,
                                   const DepthMap& init, const SolverConfig& config);

/// Least-squares slope of log(values[k]) against log(k) for k in
/// [k_min, values.size()]; values indexed from k = 1.
double loglog_slope(const std::vector<double>& values, int k_min);

}  // namespace dff
