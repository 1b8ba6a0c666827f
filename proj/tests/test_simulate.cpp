// Copyright (c) 2026 the dff authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstring>

#include <doctest.h>

#include "dff/classical.hpp"
#include "dff/rng.hpp"
#include "dff/contrast.hpp"
#include "dff/parallel.hpp"
#include "dff/simulate.hpp"

using dff::Field2D;
using dff::GroundTruth;
using dff::SceneSpec;
using dff::Shape;

namespace {

bool stacks_identical(const dff::FocalStack& a, const dff::FocalStack& b) {
  if (a.size() != b.size() || a.channels() != b.channels()) return false;
  for (int k = 0; k < a.size(); ++k)
    for (int c = 0; c < a.channels(); ++c)
      if (std::memcmp(a.slices[k].planes[c].data(), b.slices[k].planes[c].data(),
                      a.slices[k].planes[c].size() * sizeof(double)) != 0)
        return false;
  return true;
}

}  // namespace

TEST_CASE("depth profiles hit their documented extremes") {
  const int n = 64;
  SUBCASE("plane is affine and spans [0,1]") {
    const GroundTruth gt = dff::make_depth(Shape::Plane, n, n);
    auto [lo, hi] = gt.depth.min_max();
    CHECK(lo == doctest::Approx(0.0));
    CHECK(hi == doctest::Approx(1.0));
    // affine: second differences vanish
    for (int i = 1; i < n - 1; ++i)
      for (int j = 1; j < n - 1; ++j) {
        CHECK(gt.depth.at(i, j + 1) - 2 * gt.depth.at(i, j) + gt.depth.at(i, j - 1) ==
              doctest::Approx(0.0).epsilon(1e-12));
        CHECK(gt.depth.at(i + 1, j) - 2 * gt.depth.at(i, j) + gt.depth.at(i - 1, j) ==
              doctest::Approx(0.0).epsilon(1e-12));
      }
  }
  SUBCASE("cone apex sits at the center") {
    const GroundTruth gt = dff::make_depth(Shape::Cone, 65, 65);
    CHECK(gt.depth.at(32, 32) == doctest::Approx(1.0));
    CHECK(gt.depth.at(32, 0) == doctest::Approx(0.0));
  }
  SUBCASE("cosine runs one full period along x") {
    const GroundTruth gt = dff::make_depth(Shape::Cosine, n, n);
    for (int i = 0; i < n; ++i) {
      CHECK(gt.depth.at(i, 0) == doctest::Approx(gt.depth.at(i, n - 1)).epsilon(1e-12));
      CHECK(gt.depth.at(i, 0) == doctest::Approx(1.0));
    }
    auto [lo, hi] = gt.depth.min_max();
    CHECK(lo == doctest::Approx(0.0).epsilon(1e-3));
    CHECK(hi == doctest::Approx(1.0));
  }
  SUBCASE("sphere cap peaks at 1 with rim at 0") {
    const GroundTruth gt = dff::make_depth(Shape::Sphere, 65, 65);
    CHECK(gt.depth.at(32, 32) == doctest::Approx(1.0));
    CHECK(gt.depth.at(32, 0) == doctest::Approx(0.0));
    auto [lo, hi] = gt.depth.min_max();
    CHECK(lo >= 0.0);
    CHECK(hi <= 1.0);
  }
  SUBCASE("small grids and bad names are rejected") {
    CHECK_THROWS_AS(dff::make_depth(Shape::Cone, 8, 64), dff::InvalidArgument);
    CHECK_THROWS_AS(dff::parse_shape("torus"), dff::InvalidShape);
    CHECK(dff::parse_shape("cosine") == Shape::Cosine);
  }
}

TEST_CASE("rendering is deterministic, independent of thread count") {
  SceneSpec spec;
  spec.texture = dff::procedural_texture(40, 40, 11);
  spec.shape = Shape::Plane;
  spec.slice_count = 7;
  spec.seed = 42;
  const GroundTruth gt = dff::make_depth(Shape::Plane, 40, 40);

  const auto a = dff::render_stack(spec, gt);
  const auto b = dff::render_stack(spec, gt);
  CHECK(stacks_identical(a, b));

  const int saved = dff::thread_count();
  dff::set_thread_count(1);
  const auto serial = dff::render_stack(spec, gt);
  dff::set_thread_count(4);
  const auto parallel = dff::render_stack(spec, gt);
  dff::set_thread_count(saved);
  CHECK(stacks_identical(serial, parallel));

  // a different seed changes the noise
  spec.seed = 43;
  CHECK_FALSE(stacks_identical(a, dff::render_stack(spec, gt)));
}

TEST_CASE("no blur and no noise reproduces the texture in every slice") {
  SceneSpec spec;
  spec.texture = dff::procedural_texture(32, 32, 5);
  spec.slice_count = 5;
  spec.noise_a = 0.0;
  spec.noise_b = 0.0;
  spec.psf_gain = 1e-9;
  const GroundTruth gt = dff::make_depth(Shape::Cone, 32, 32);
  const auto stack = dff::render_stack(spec, gt);
  for (int k = 0; k < 5; ++k)
    CHECK(std::memcmp(stack.slices[k].planes[0].data(), spec.texture.planes[0].data(),
                      spec.texture.planes[0].size() * sizeof(double)) == 0);
}

TEST_CASE("the in-focus slice of a flat scene is exact; neighbors are blurred") {
  SceneSpec spec;
  spec.texture = dff::procedural_texture(32, 32, 9);
  spec.slice_count = 5;  // positions 0, .25, .5, .75, 1
  spec.noise_a = 0.0;
  spec.noise_b = 0.0;
  spec.psf_gain = 6.0;
  GroundTruth gt{Field2D(32, 32, 0.5)};
  const auto stack = dff::render_stack(spec, gt);
  CHECK(std::memcmp(stack.slices[2].planes[0].data(), spec.texture.planes[0].data(),
                    spec.texture.planes[0].size() * sizeof(double)) == 0);
  double diff = 0.0;
  for (int i = 0; i < 32; ++i)
    for (int j = 0; j < 32; ++j)
      diff += std::abs(stack.slices[1].planes[0].at(i, j) - spec.texture.planes[0].at(i, j));
  CHECK(diff / (32 * 32) > 1e-3);
}

TEST_CASE("noise-free rendering lets per-pixel argmax recover the truth to quantization") {
  const int n = 48, s = 9;
  SceneSpec spec;
  // strong texture at every pixel: checker pattern plus hashed perturbation
  spec.texture = dff::Image(n, n, 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      spec.texture.planes[0].at(i, j) =
          0.5 + 0.2 * ((i + j) % 2 ? 1.0 : -1.0) +
          0.2 * (dff::rng::uniform(dff::rng::key(21, i, j)) - 0.5);
  spec.slice_count = s;
  spec.noise_a = 0.0;
  spec.noise_b = 0.0;
  const GroundTruth gt = dff::make_depth(Shape::Cone, n, n);
  const auto stack = dff::render_stack(spec, gt);
  const auto vol = dff::mlap(stack);
  const auto d = dff::argmax_depth(vol, stack.focus_positions);
  const double quantum = 0.5 / (s - 1);
  int within_quantum = 0, within_one_slice = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double err = std::abs(d.at(i, j) - gt.depth.at(i, j));
      if (err <= quantum + 1e-9) ++within_quantum;
      // near half-spacing depths may legitimately tie to either neighbor
      if (err <= 2.0 * quantum + 1e-9) ++within_one_slice;
    }
  CHECK(static_cast<double>(within_quantum) / (n * n) >= 0.9);
  CHECK(within_one_slice == n * n);
}

TEST_CASE("scoring basics") {
  const GroundTruth gt = dff::make_depth(Shape::Plane, 32, 32);
  auto [mse0, rmse0] = dff::score(gt.depth, gt, dff::ScoreUnits::Slices, 15);
  CHECK(mse0 == 0.0);
  CHECK(rmse0 == 0.0);

  Field2D est = gt.depth;
  const int s = 15;
  for (int i = 0; i < 32; ++i)
    for (int j = 0; j < 32; ++j) est.at(i, j) += 1.0 / (s - 1);
  auto [mse1, rmse1] = dff::score(est, gt, dff::ScoreUnits::Slices, s);
  CHECK(rmse1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mse1 == doctest::Approx(1.0).epsilon(1e-12));
  auto [mse_n, rmse_n] = dff::score(est, gt, dff::ScoreUnits::Normalized, s);
  CHECK(rmse_n == doctest::Approx(1.0 / (s - 1)).epsilon(1e-12));
  CHECK(mse_n == doctest::Approx(1.0 / ((s - 1.0) * (s - 1.0))).epsilon(1e-12));

  // sign symmetry
  Field2D lower = gt.depth;
  for (int i = 0; i < 32; ++i)
    for (int j = 0; j < 32; ++j) lower.at(i, j) -= 1.0 / (s - 1);
  auto [mse2, rmse2] = dff::score(lower, gt, dff::ScoreUnits::Slices, s);
  CHECK(rmse2 == doctest::Approx(rmse1));
  (void)mse2;

  CHECK_THROWS_AS(dff::score(Field2D(8, 8, 0.0), gt, dff::ScoreUnits::Slices, s),
                  dff::InvalidArgument);
}
