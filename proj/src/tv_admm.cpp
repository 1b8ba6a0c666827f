// Copyright (c) 2026 the dff authors
// SPDX-License-Identifier: Apache-2.0

#include "dff/tv_admm.hpp"

#include <algorithm>
#include <cmath>

#include "dff/classical.hpp"
#include "dff/contrast.hpp"
#include "dff/errors.hpp"
#include "dff/filters.hpp"
#include "dff/kernels.hpp"
#include "dff/parallel.hpp"

namespace dff {

SolverConfig SolverConfig::normalized_for(int slice_count) const {
  if (slice_count < 2) throw InvalidArgument("slice count must be >= 2");
  const double span = slice_count - 1.0;
  SolverConfig c = *this;
  c.alpha = alpha * span;
  c.tau = tau / (span * span);
  return c;
}

void SolverConfig::validate() const {
  if (!(alpha >= 0.0)) throw InvalidArgument("alpha must be nonnegative");
  if (!(tau > 0.0)) throw InvalidArgument("tau must be positive");
  if (!(lambda0 > 0.0)) throw InvalidPenalty("lambda0 must be positive");
  if (!(lambda_growth >= 1.0)) throw InvalidArgument("lambda growth must be >= 1");
  if (iterations < 1) throw InvalidArgument("iteration count must be >= 1");
  if (!(clamp_hi > clamp_lo)) throw InvalidArgument("clamp range must be nonempty");
  if (contrast_target < 0.0) throw InvalidArgument("contrast target must be >= 0");
  if (fit_degree < 0) throw InvalidArgument("fit degree must be nonnegative");
  if (init_contrast_window < 1 || init_contrast_window % 2 == 0 || init_blur_window < 1 ||
      init_blur_window % 2 == 0)
    throw InvalidWindow("initialization windows must be odd and positive");
}

GradientField grad(const DepthMap& d) {
  const int rows = d.rows(), cols = d.cols();
  GradientField g(rows, cols);
  const auto& k = kernels::ops();
  parallel_for(0, rows, [&](int i) {
    k.forward_diff_row(cols, d.row(i), g.gx.row(i));
    if (i < rows - 1)
      k.sub(cols, d.row(i + 1), d.row(i), g.gy.row(i));
    else
      std::fill(g.gy.row(i), g.gy.row(i) + cols, 0.0);
  });
  return g;
}

Field2D grad_adjoint(const GradientField& g) {
  const int rows = g.rows(), cols = g.cols();
  Field2D out(rows, cols, 0.0);
  const auto& k = kernels::ops();
  // x-part per row; entries in the last column are outside the range of K
  // and are ignored to keep the adjoint exact for arbitrary inputs.
  if (cols > 1)
    parallel_for(0, rows, [&](int i) { k.adjoint_diff_row(cols, g.gx.row(i), out.row(i)); });
  // y-part, same structure across rows.
  if (rows > 1) {
    parallel_for(0, rows, [&](int i) {
      double* dst = out.row(i);
      if (i == 0)
        k.axpby(cols, 1.0, dst, -1.0, g.gy.row(0), dst);
      else if (i == rows - 1)
        k.axpby(cols, 1.0, dst, 1.0, g.gy.row(rows - 2), dst);
      else
        k.accum_sub(cols, g.gy.row(i - 1), g.gy.row(i), dst);
    });
  }
  return out;
}

namespace {

double tv_of_gradient(const GradientField& g) {
  const auto& k = kernels::ops();
  return parallel_sum(0, g.rows(),
                      [&](int i) { return k.tv_row(g.cols(), g.gx.row(i), g.gy.row(i)); });
}

double sumsq_field(const Field2D& f) {
  const auto& k = kernels::ops();
  return parallel_sum(0, f.rows(), [&](int i) { return k.sumsq(f.cols(), f.row(i)); });
}

double sumsq_diff_grad(const GradientField& a, const GradientField& b) {
  const auto& k = kernels::ops();
  return parallel_sum(0, a.rows(), [&](int i) {
    return k.sumsq_diff(a.cols(), a.gx.row(i), b.gx.row(i)) +
           k.sumsq_diff(a.cols(), a.gy.row(i), b.gy.row(i));
  });
}

}  // namespace

double tv_energy(const DepthMap& d) { return tv_of_gradient(grad(d)); }

double data_energy(const DepthMap& d, const ContrastCurveField& curves, double clamp_lo,
                   double clamp_hi) {
  const int rows = d.rows(), cols = d.cols();
  if (rows != curves.rows() || cols != curves.cols())
    throw InvalidArgument("depth and curve field dimensions disagree");
  const auto& k = kernels::ops();
  const double total = parallel_sum(0, rows, [&](int i) {
    std::vector<double> val(cols);
    curves.eval_row(i, d.row(i), clamp_lo, clamp_hi, val.data(), nullptr);
    return k.sum(cols, val.data());
  });
  return -total;
}

Field2D grad_data(const DepthMap& d, const ContrastCurveField& curves, double clamp_lo,
                  double clamp_hi) {
  const int rows = d.rows(), cols = d.cols();
  if (rows != curves.rows() || cols != curves.cols())
    throw InvalidArgument("depth and curve field dimensions disagree");
  Field2D out(rows, cols);
  const auto& k = kernels::ops();
  parallel_for(0, rows, [&](int i) {
    double* dst = out.row(i);
    curves.eval_row(i, d.row(i), clamp_lo, clamp_hi, nullptr, dst);
    k.axpby(cols, -1.0, dst, 0.0, dst, dst);  // D = -sum c, so dD = -c'
  });
  return out;
}

GradientField shrink_iso(const GradientField& z, double threshold) {
  if (!(threshold >= 0.0)) throw InvalidThreshold("shrinkage threshold must be nonnegative");
  GradientField g(z.rows(), z.cols());
  const auto& k = kernels::ops();
  parallel_for(0, z.rows(), [&](int i) {
    k.shrink_row(z.cols(), z.gx.row(i), z.gy.row(i), threshold, g.gx.row(i), g.gy.row(i));
  });
  return g;
}

IterationRecord admm_step(SolverState& state, const ContrastCurveField& curves,
                          const SolverConfig& config, DctSolver& dct) {
  const int rows = state.d.rows(), cols = state.d.cols();
  const double lambda = state.lambda;
  const auto& k = kernels::ops();

  // (1) quadratic subproblem on the linearized data term
  const Field2D gd = grad_data(state.d, curves, config.clamp_lo, config.clamp_hi);
  GradientField gmb(rows, cols);
  parallel_for(0, rows, [&](int i) {
    k.sub(cols, state.g.gx.row(i), state.b.gx.row(i), gmb.gx.row(i));
    k.sub(cols, state.g.gy.row(i), state.b.gy.row(i), gmb.gy.row(i));
  });
  Field2D rhs = grad_adjoint(gmb);
  parallel_for(0, rows, [&](int i) {
    k.lincomb3(cols, lambda, rhs.row(i), 1.0, state.d.row(i), -config.tau, gd.row(i), rhs.row(i));
  });
  Field2D d_new(rows, cols);
  dct.solve(rhs, lambda, d_new);

  // (2) shrinkage of the split variable
  GradientField kd = grad(d_new);
  const double cross_residual_sq = sumsq_diff_grad(kd, state.g);
  GradientField z(rows, cols);
  parallel_for(0, rows, [&](int i) {
    k.axpby(cols, 1.0, kd.gx.row(i), 1.0, state.b.gx.row(i), z.gx.row(i));
    k.axpby(cols, 1.0, kd.gy.row(i), 1.0, state.b.gy.row(i), z.gy.row(i));
  });
  GradientField g_new = shrink_iso(z, config.alpha * config.tau / lambda);

  // (3) dual ascent: b += Kd - g
  parallel_for(0, rows, [&](int i) {
    k.accum_sub(cols, kd.gx.row(i), g_new.gx.row(i), state.b.gx.row(i));
    k.accum_sub(cols, kd.gy.row(i), g_new.gy.row(i), state.b.gy.row(i));
  });

  IterationRecord rec;
  rec.iteration = state.k + 1;
  rec.iterate_change_sq =
      sumsq_diff_grad(g_new, state.g) +
      parallel_sum(0, rows, [&](int i) { return k.sumsq_diff(cols, d_new.row(i), state.d.row(i)); });
  rec.split_residual_sq = sumsq_diff_grad(kd, g_new);
  rec.cross_residual_sq = cross_residual_sq;
  rec.energy = data_energy(d_new, curves, config.clamp_lo, config.clamp_hi) +
               config.alpha * tv_of_gradient(kd);
  rec.lambda = lambda;

  state.d = std::move(d_new);
  state.g = std::move(g_new);
  state.k += 1;

  // (4) penalty growth with matching rescale of the scaled dual variable
  const double factor =
      lambda >= config.lambda_cap
          ? 1.0
          : std::min(config.lambda_growth, config.lambda_cap / lambda);
  if (factor != 1.0) {
    state.lambda = lambda * factor;
    const double inv = 1.0 / factor;
    parallel_for(0, rows, [&](int i) {
      k.axpby(cols, inv, state.b.gx.row(i), 0.0, state.b.gx.row(i), state.b.gx.row(i));
      k.axpby(cols, inv, state.b.gy.row(i), 0.0, state.b.gy.row(i), state.b.gy.row(i));
    });
  }

  const double b_sq = sumsq_field(state.b.gx) + sumsq_field(state.b.gy);
  if (!std::isfinite(rec.energy) || !std::isfinite(rec.iterate_change_sq) ||
      !std::isfinite(rec.split_residual_sq) || !std::isfinite(b_sq))
    throw DivergenceDetected("non-finite iterate at iteration " + std::to_string(rec.iteration));
  return rec;
}

DepthMap initial_depth(const ContrastVolume& volume, const std::vector<double>& positions,
                       const SolverConfig& config) {
  ContrastVolume filtered = filter_contrast(volume, config.init_contrast_window);
  const auto idx = argmax_indices(filtered);
  DepthMap d = gaussian_3pt_refine(filtered, positions, idx);
  return mean_filter(d, config.init_blur_window);
}

std::pair<DepthMap, Diagnostics> solve_from_curves(const ContrastCurveField& curves,
                                                   const DepthMap& init,
                                                   const SolverConfig& config) {
  config.validate();
  if (init.rows() != curves.rows() || init.cols() != curves.cols())
    throw InvalidArgument("initial depth and curve field dimensions disagree");

  SolverState state;
  state.d = init;
  state.g = grad(init);
  state.b = GradientField(init.rows(), init.cols());
  state.lambda = config.lambda0;
  state.k = 0;

  DctSolver dct(init.rows(), init.cols());
  Diagnostics diag;
  diag.reserve(config.iterations);
  for (int it = 0; it < config.iterations; ++it)
    diag.push_back(admm_step(state, curves, config, dct));

  DepthMap d = std::move(state.d);
  for (int i = 0; i < d.rows(); ++i) {
    double* row = d.row(i);
    for (int j = 0; j < d.cols(); ++j) row[j] = std::clamp(row[j], config.clamp_lo, config.clamp_hi);
  }
  return {std::move(d), std::move(diag)};
}

std::pair<DepthMap, Diagnostics> solve(const FocalStack& stack, const SolverConfig& config) {
  config.validate();
  stack.validate();
  const SolverConfig cfg = config.normalized_for(stack.size());
  ContrastVolume volume = mlap(stack);
  if (cfg.contrast_target > 0.0)
    scale_contrast(volume, contrast_normalization(volume, cfg.contrast_target));
  const ContrastCurveField curves = fit_curves(volume, stack.focus_positions, cfg.fit_degree);
  const DepthMap init = initial_depth(volume, stack.focus_positions, cfg);
  return solve_from_curves(curves, init, cfg);
}

double loglog_slope(const std::vector<double>& values, int k_min) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t i = 0; i < values.size(); ++i) {
    const int kk = static_cast<int>(i) + 1;
    if (kk < k_min) continue;
    const double x = std::log(static_cast<double>(kk));
    const double y = std::log(std::max(values[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return 0.0;
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

// Symmetric Bregman distance of the quadratic data term: for per-pixel
// c(x) = q0 + q1 x + q2 x^2 the Hessian of D = -sum c is -2 q2, so
// S_D(u, v) = sum_p (-2 q2_p) (u_p - v_p)^2.
double bregman_data_quadratic(const DepthMap& u, const DepthMap& v, const Field2D& curvature2) {
  double s = 0.0;
  for (int i = 0; i < u.rows(); ++i)
    for (int j = 0; j < u.cols(); ++j) {
      const double e = u.at(i, j) - v.at(i, j);
      s += curvature2.at(i, j) * e * e;
    }
  return s;
}

// Symmetric Bregman distance of ||.||_{2,1} with the subgradient selection
// q(g) = g/||g|| (zero at zero).
double bregman_tv(const GradientField& g, const GradientField& gref) {
  double s = 0.0;
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j) {
      const double ax = g.gx.at(i, j), ay = g.gy.at(i, j);
      const double bx = gref.gx.at(i, j), by = gref.gy.at(i, j);
      const double na = std::sqrt(ax * ax + ay * ay), nb = std::sqrt(bx * bx + by * by);
      const double qax = na > 0 ? ax / na : 0.0, qay = na > 0 ? ay / na : 0.0;
      const double qbx = nb > 0 ? bx / nb : 0.0, qby = nb > 0 ? by / nb : 0.0;
      s += (ax - bx) * (qax - qbx) + (ay - by) * (qay - qby);
    }
  return s;
}

}  // namespace

ConvexModeReport solve_convex_mode(const ContrastCurveField& quadratic_curves,
                                   const DepthMap& init, const SolverConfig& config) {
  config.validate();
  if (quadratic_curves.basis != CurveBasis::Monomial || quadratic_curves.degree != 2)
    throw InvalidArgument("convex mode expects degree-2 monomial curves");
  if (config.lambda_growth != 1.0)
    throw InvalidArgument("convex mode requires a fixed penalty (growth = 1)");

  const int rows = quadratic_curves.rows(), cols = quadratic_curves.cols();
  Field2D curvature2(rows, cols);  // -2 q2 per pixel = Hessian of D
  double curv_max = 0.0;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const double q2 = quadratic_curves.coeffs[2].at(i, j);
      if (q2 > 0.0) throw InvalidArgument("convex mode requires concave parabolas (q2 <= 0)");
      curvature2.at(i, j) = -2.0 * q2;
      curv_max = std::max(curv_max, -2.0 * q2);
    }

  ConvexModeReport report;
  report.tau_curvature = config.tau * curv_max;
  report.hypothesis_ok = report.tau_curvature <= 1.0 + 1e-12;

  SolverConfig cfg = config;
  cfg.clamp_lo = -1e300;  // the quadratic model is global; no clamping
  cfg.clamp_hi = 1e300;

  // High-accuracy reference solution.
  SolverConfig ref_cfg = cfg;
  ref_cfg.iterations = cfg.iterations * 10;
  report.d_reference = solve_from_curves(quadratic_curves, init, ref_cfg).first;
  const GradientField g_ref = grad(report.d_reference);

  SolverState state;
  state.d = init;
  state.g = grad(init);
  state.b = GradientField(rows, cols);
  state.lambda = cfg.lambda0;
  DctSolver dct(rows, cols);

  std::vector<double> cross(cfg.iterations);
  report.k_bregman.reserve(cfg.iterations);
  for (int it = 0; it < cfg.iterations; ++it) {
    const IterationRecord rec = admm_step(state, quadratic_curves, cfg, dct);
    cross[it] = rec.cross_residual_sq;
    const double sd = bregman_data_quadratic(state.d, report.d_reference, curvature2);
    const double sr = bregman_tv(state.g, g_ref);
    report.k_bregman.push_back((it + 1) * (sd + cfg.alpha * sr));
  }
  // Entry k pairs the post-step-(k+1) gradient with the pre-step g.
  report.k_cross_residual.reserve(cfg.iterations - 1);
  for (int k = 1; k < cfg.iterations; ++k)
    report.k_cross_residual.push_back(k * cross[k]);

  report.slope_bregman = loglog_slope(report.k_bregman, 10);
  report.slope_cross_residual = loglog_slope(report.k_cross_residual, 10);
  report.d_final = std::move(state.d);
  return report;
}

}  // namespace dff
