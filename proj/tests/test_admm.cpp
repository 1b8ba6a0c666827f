// Copyright (c) 2026 the dff authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <doctest.h>

#include "dff/contrast.hpp"
#include "dff/rng.hpp"
#include "dff/simulate.hpp"
#include "dff/tv_admm.hpp"

using dff::ContrastCurveField;
using dff::DepthMap;
using dff::Field2D;
using dff::GradientField;
using dff::SolverConfig;
using dff::SolverState;

namespace {

ContrastCurveField constant_curves(int rows, int cols, double value) {
  ContrastCurveField f;
  f.degree = 2;
  f.basis = dff::CurveBasis::Monomial;
  f.coeffs.assign(3, Field2D(rows, cols, 0.0));
  f.coeffs[0].fill(value);
  return f;
}

// c(x) = peak - curv*(x - x*)^2 per pixel, monomial coefficients
ContrastCurveField parabola_curves(int rows, int cols, double xstar, double curv) {
  ContrastCurveField f;
  f.degree = 2;
  f.basis = dff::CurveBasis::Monomial;
  f.coeffs.assign(3, Field2D(rows, cols, 0.0));
  f.coeffs[0].fill(1.0 - curv * xstar * xstar);
  f.coeffs[1].fill(2.0 * curv * xstar);
  f.coeffs[2].fill(-curv);
  return f;
}

Field2D random_field(int rows, int cols, uint64_t seed, double lo, double hi) {
  Field2D f(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      f.at(i, j) = lo + (hi - lo) * dff::rng::uniform(dff::rng::key(seed, i, j));
  return f;
}

}  // namespace

TEST_CASE("one step equals the composition of its sub-operations") {
  const int rows = 8, cols = 8;
  ContrastCurveField curves;
  curves.degree = 8;
  curves.basis = dff::CurveBasis::Chebyshev01;
  curves.coeffs.assign(9, Field2D(rows, cols, 0.0));
  for (int c = 0; c <= 8; ++c)
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        curves.coeffs[c].at(i, j) =
            (dff::rng::uniform(dff::rng::key(42, c, i, j)) - 0.45) / (1.0 + c * c);

  SolverConfig cfg;
  cfg.alpha = 0.3;
  cfg.tau = 2.0;
  cfg.lambda0 = 1.5;
  cfg.lambda_growth = 1.02;

  SolverState state;
  state.d = random_field(rows, cols, 7, 0.0, 1.0);
  state.g = dff::grad(random_field(rows, cols, 8, 0.0, 1.0));
  state.b = dff::grad(random_field(rows, cols, 9, -0.2, 0.2));
  state.lambda = cfg.lambda0;

  // independent composition from the public sub-operations
  GradientField gmb(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      gmb.gx.at(i, j) = state.g.gx.at(i, j) - state.b.gx.at(i, j);
      gmb.gy.at(i, j) = state.g.gy.at(i, j) - state.b.gy.at(i, j);
    }
  const Field2D kt = dff::grad_adjoint(gmb);
  const Field2D gd = dff::grad_data(state.d, curves, cfg.clamp_lo, cfg.clamp_hi);
  Field2D rhs(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      rhs.at(i, j) = cfg.lambda0 * kt.at(i, j) + state.d.at(i, j) - cfg.tau * gd.at(i, j);
  const Field2D d_expect = dff::dct_solve(rhs, cfg.lambda0);
  const GradientField kd = dff::grad(d_expect);
  GradientField z(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      z.gx.at(i, j) = kd.gx.at(i, j) + state.b.gx.at(i, j);
      z.gy.at(i, j) = kd.gy.at(i, j) + state.b.gy.at(i, j);
    }
  const GradientField g_expect = dff::shrink_iso(z, cfg.alpha * cfg.tau / cfg.lambda0);
  GradientField b_expect(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      b_expect.gx.at(i, j) =
          (state.b.gx.at(i, j) + kd.gx.at(i, j) - g_expect.gx.at(i, j)) / cfg.lambda_growth;
      b_expect.gy.at(i, j) =
          (state.b.gy.at(i, j) + kd.gy.at(i, j) - g_expect.gy.at(i, j)) / cfg.lambda_growth;
    }

  dff::DctSolver dct(rows, cols);
  dff::admm_step(state, curves, cfg, dct);

  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      CHECK(state.d.at(i, j) == doctest::Approx(d_expect.at(i, j)).epsilon(1e-12));
      CHECK(state.g.gx.at(i, j) == doctest::Approx(g_expect.gx.at(i, j)).epsilon(1e-12));
      CHECK(state.g.gy.at(i, j) == doctest::Approx(g_expect.gy.at(i, j)).epsilon(1e-12));
      CHECK(state.b.gx.at(i, j) == doctest::Approx(b_expect.gx.at(i, j)).epsilon(1e-12));
      CHECK(state.b.gy.at(i, j) == doctest::Approx(b_expect.gy.at(i, j)).epsilon(1e-12));
    }
  CHECK(state.lambda == doctest::Approx(cfg.lambda0 * cfg.lambda_growth));
  CHECK(state.k == 1);
}

TEST_CASE("constant curves and constant depth form a critical point") {
  const int rows = 6, cols = 6;
  const auto curves = constant_curves(rows, cols, 2.0);
  SolverConfig cfg;
  cfg.alpha = 0.5;
  SolverState state;
  state.d = Field2D(rows, cols, 0.4);
  state.g = GradientField(rows, cols);
  state.b = GradientField(rows, cols);
  state.lambda = cfg.lambda0;
  dff::DctSolver dct(rows, cols);
  for (int it = 0; it < 10; ++it) dff::admm_step(state, curves, cfg, dct);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      CHECK(state.d.at(i, j) == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("without regularization the iterates settle at the per-pixel peak") {
  const int rows = 8, cols = 8;
  const double xstar = 0.62;
  const auto curves = parabola_curves(rows, cols, xstar, 1.0);  // L = 2
  SolverConfig cfg;
  cfg.alpha = 0.0;
  cfg.tau = 0.25;  // tau * L = 0.5
  cfg.lambda_growth = 1.0;
  cfg.iterations = 200;
  const auto [d, diag] = dff::solve_from_curves(curves, Field2D(rows, cols, 0.2), cfg);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) CHECK(std::abs(d.at(i, j) - xstar) <= 1e-8);
  // energy settles monotonically after the initial transient
  for (size_t k = 10; k < diag.size(); ++k)
    CHECK(diag[k].energy <= diag[k - 1].energy + 1e-10 * std::abs(diag[0].energy));
}

TEST_CASE("zero-contrast stack stays at its initialization") {
  dff::FocalStack stack;
  for (int k = 0; k < 5; ++k) stack.slices.emplace_back(24, 24, 1, 0.5);
  stack.focus_positions = dff::uniform_focus_positions(5);
  SolverConfig cfg;
  cfg.iterations = 40;
  cfg.fit_degree = 4;
  const auto [d, diag] = dff::solve(stack, cfg);
  // constant stack -> zero contrast -> argmax ties to the front slice
  for (int i = 0; i < 24; ++i)
    for (int j = 0; j < 24; ++j) CHECK(std::abs(d.at(i, j)) <= 1e-10);
  for (const auto& r : diag) CHECK(std::isfinite(r.energy));
}

TEST_CASE("dominant regularization flattens the depth map") {
  const dff::Image texture = dff::procedural_texture(48, 48, 5);
  const dff::GroundTruth gt = dff::make_depth(dff::Shape::Cone, 48, 48);
  dff::SceneSpec spec;
  spec.texture = texture;
  spec.shape = dff::Shape::Cone;
  spec.slice_count = 9;
  spec.seed = 3;
  const dff::FocalStack stack = dff::render_stack(spec, gt);
  SolverConfig cfg;
  cfg.alpha = 1000.0;
  cfg.iterations = 800;  // flattening completes once the penalty catches up
  const auto [d, diag] = dff::solve(stack, cfg);
  auto [lo, hi] = d.min_max();
  CHECK(hi - lo <= 0.05);
}

TEST_CASE("full pipeline: energy decays and the split collapses on a dense stack") {
  // densely sampled focus keeps the linearization step well inside its
  // stable regime, so the energy decay is clean from the start
  const int n = 64, s = 81;
  dff::SceneSpec spec;
  spec.texture = dff::procedural_texture(n, n, 13);
  spec.shape = dff::Shape::Sphere;
  spec.slice_count = s;
  spec.seed = 13;
  const dff::GroundTruth gt = dff::make_depth(dff::Shape::Sphere, n, n);
  const dff::FocalStack stack = dff::render_stack(spec, gt);

  SolverConfig cfg;
  cfg.alpha = 0.25;
  const SolverConfig ncfg = cfg.normalized_for(s);
  dff::ContrastVolume vol = dff::mlap(stack);
  dff::scale_contrast(vol, dff::contrast_normalization(vol, ncfg.contrast_target));
  const auto curves = dff::fit_curves(vol, stack.focus_positions, ncfg.fit_degree);
  const DepthMap init = dff::initial_depth(vol, stack.focus_positions, ncfg);
  const double e0 = dff::data_energy(init, curves, ncfg.clamp_lo, ncfg.clamp_hi) +
                    ncfg.alpha * dff::tv_energy(init);
  const auto [d, diag] = dff::solve_from_curves(curves, init, ncfg);

  const double tol = 1e-3 * std::abs(e0);
  for (size_t k = 10; k < diag.size(); ++k)
    CHECK(diag[k].energy <= diag[k - 1].energy + tol);
  CHECK(diag[399].split_residual_sq <= 1e-6 * diag[9].split_residual_sq);
}

TEST_CASE("penalty growth caps and rescales the dual variable consistently") {
  const int rows = 4, cols = 4;
  const auto curves = constant_curves(rows, cols, 1.0);
  SolverConfig cfg;
  cfg.lambda0 = 0.9e6;
  cfg.lambda_growth = 1.5;
  SolverState state;
  state.d = random_field(rows, cols, 3, 0.0, 1.0);
  state.g = dff::grad(state.d);
  state.b = GradientField(rows, cols);
  state.lambda = cfg.lambda0;
  dff::DctSolver dct(rows, cols);
  dff::admm_step(state, curves, cfg, dct);
  CHECK(state.lambda == doctest::Approx(1e6));  // clipped to the cap
  dff::admm_step(state, curves, cfg, dct);
  CHECK(state.lambda == doctest::Approx(1e6));  // no further growth
}

TEST_CASE("divergent iterates are detected") {
  const int rows = 6, cols = 6;
  ContrastCurveField curves;
  curves.degree = 1;
  curves.basis = dff::CurveBasis::Monomial;
  curves.coeffs.assign(2, Field2D(rows, cols, 0.0));
  curves.coeffs[1].fill(1.0);  // c(x) = x, constant slope
  SolverConfig cfg;
  cfg.tau = 1e200;  // absurd step: iterate change overflows
  cfg.iterations = 5;
  CHECK_THROWS_AS(dff::solve_from_curves(curves, Field2D(rows, cols, 0.5), cfg),
                  dff::DivergenceDetected);
}

TEST_CASE("solver configuration validation") {
  SolverConfig cfg;
  cfg.alpha = -0.1;
  CHECK_THROWS_AS(cfg.validate(), dff::InvalidArgument);
  cfg = SolverConfig{};
  cfg.tau = 0.0;
  CHECK_THROWS_AS(cfg.validate(), dff::InvalidArgument);
  cfg = SolverConfig{};
  cfg.lambda0 = -1.0;
  CHECK_THROWS_AS(cfg.validate(), dff::InvalidPenalty);
  cfg = SolverConfig{};
  cfg.lambda_growth = 0.99;
  CHECK_THROWS_AS(cfg.validate(), dff::InvalidArgument);
  cfg = SolverConfig{};
  cfg.iterations = 0;
  CHECK_THROWS_AS(cfg.validate(), dff::InvalidArgument);
  cfg = SolverConfig{};
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.alpha == 0.25);
  CHECK(cfg.tau == 8.0);
  CHECK(cfg.lambda0 == 1.0);
  CHECK(cfg.lambda_growth == 1.02);
  CHECK(cfg.iterations == 400);
}
