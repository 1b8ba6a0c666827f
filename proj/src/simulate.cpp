// Copyright (c) 2026 the dff authors
// SPDX-License-Identifier: Apache-2.0

#include "dff/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "dff/errors.hpp"
#include "dff/parallel.hpp"
#include "dff/rng.hpp"

namespace dff {

Shape parse_shape(const std::string& name) {
  if (name == "cone") return Shape::Cone;
  if (name == "plane") return Shape::Plane;
  if (name == "cosine") return Shape::Cosine;
  if (name == "sphere") return Shape::Sphere;
  throw InvalidShape("unknown shape: " + name);
}

std::string shape_name(Shape s) {
  switch (s) {
    case Shape::Cone:
      return "cone";
    case Shape::Plane:
      return "plane";
    case Shape::Cosine:
      return "cosine";
    case Shape::Sphere:
      return "sphere";
  }
  return "?";
}

GroundTruth make_depth(Shape shape, int rows, int cols) {
  if (rows < 16 || cols < 16) throw InvalidArgument("depth profiles need at least 16x16");
  GroundTruth gt{DepthMap(rows, cols)};
  const double ci = (rows - 1) / 2.0, cj = (cols - 1) / 2.0;
  const double rmax = std::min(ci, cj);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const double di = i - ci, dj = j - cj;
      const double r = std::sqrt(di * di + dj * dj);
      double v = 0.0;
      switch (shape) {
        case Shape::Cone:
          v = std::max(0.0, 1.0 - r / rmax);
          break;
        case Shape::Plane:
          v = 0.5 * (static_cast<double>(i) / (rows - 1) + static_cast<double>(j) / (cols - 1));
          break;
        case Shape::Cosine:
          v = 0.5 + 0.5 * std::cos(2.0 * M_PI * j / (cols - 1));
          break;
        case Shape::Sphere: {
          // spherical cap with a bounded rim slope (sphere radius 1.25x the
          // cap radius), renormalized to [0,1]
          const double t = r / rmax;
          const double rr = 1.25;
          const double base = std::sqrt(rr * rr - 1.0);
          v = t < 1.0 ? (std::sqrt(rr * rr - t * t) - base) / (rr - base) : 0.0;
          break;
        }
      }
      gt.depth.at(i, j) = std::clamp(v, 0.0, 1.0);
    }
  return gt;
}

namespace {

// Smooth lattice value noise: hashed lattice values, bilinear interpolation
// with smoothstep weights, period = cell size in pixels.
double value_noise(uint64_t seed, uint64_t octave, double i, double j, double cell) {
  const double fi = i / cell, fj = j / cell;
  const auto i0 = static_cast<int64_t>(std::floor(fi));
  const auto j0 = static_cast<int64_t>(std::floor(fj));
  const double ti = fi - i0, tj = fj - j0;
  const double wi = ti * ti * (3.0 - 2.0 * ti);
  const double wj = tj * tj * (3.0 - 2.0 * tj);
  auto lattice = [&](int64_t a, int64_t b) {
    return rng::uniform(rng::key(seed, octave, static_cast<uint64_t>(a), static_cast<uint64_t>(b)));
  };
  const double v00 = lattice(i0, j0), v01 = lattice(i0, j0 + 1);
  const double v10 = lattice(i0 + 1, j0), v11 = lattice(i0 + 1, j0 + 1);
  const double top = v00 + (v01 - v00) * wj;
  const double bot = v10 + (v11 - v10) * wj;
  return top + (bot - top) * wi;  // in [0,1]
}

}  // namespace

Image procedural_texture(int rows, int cols, uint64_t seed, bool with_weak_patches) {
  Image img(rows, cols, 1);
  Field2D& f = img.planes[0];
  parallel_for(0, rows, [&](int i) {
    for (int j = 0; j < cols; ++j) {
      // Texture strength mask. One large elliptical flat region per scene
      // (seeded center and radii) whose interior carries no focus evidence
      // at all: its diameter exceeds any practical contrast-filter window,
      // which is what makes windowed argmax estimators unreliable there.
      double strength = 1.0;
      if (with_weak_patches) {
        const double ci = (0.30 + 0.40 * rng::uniform(rng::key(seed, 201, 1))) * rows;
        const double cj = (0.30 + 0.40 * rng::uniform(rng::key(seed, 201, 2))) * cols;
        const double rad = std::min(rows, cols) *
                           (0.20 + 0.06 * rng::uniform(rng::key(seed, 201, 3)));
        const double ecc = 0.75 + 0.5 * rng::uniform(rng::key(seed, 201, 4));
        const double di = (i - ci) / (rad * ecc), dj = (j - cj) / (rad / ecc);
        const double rho = std::sqrt(di * di + dj * dj);
        const double t = std::clamp((rho - 1.0) * rad / 8.0, 0.0, 1.0);
        strength = t * t * (3.0 - 2.0 * t);
      }
      // high-contrast per-pixel detail pushed toward the extremes, plus a
      // mid-scale component so several frequencies carry focus evidence
      double fine = rng::uniform(rng::key(seed, 7, static_cast<uint64_t>(i),
                                          static_cast<uint64_t>(j)));
      fine = fine > 0.5 ? 0.5 + (fine - 0.5) : -0.5 - (0.5 - fine);
      const double mid = 2.0 * (value_noise(seed, 2, i, j, 6.0) - 0.5);
      f.at(i, j) = std::clamp(0.5 + strength * (0.6 * fine + 0.5 * mid), 0.01, 0.99);
    }
  });
  return img;
}

FocalStack render_stack(const SceneSpec& spec, const GroundTruth& gt) {
  spec.texture.validate();
  if (spec.slice_count < 3) throw TooFewSlices("simulation needs at least 3 slices");
  if (spec.noise_a < 0.0 || spec.noise_b < 0.0) throw InvalidArgument("noise variances must be >= 0");
  if (!(spec.psf_gain > 0.0)) throw InvalidArgument("psf gain must be positive");
  if (!gt.depth.same_shape(spec.texture.planes[0]))
    throw InvalidArgument("ground truth and texture dimensions disagree");
  {
    auto [lo, hi] = gt.depth.min_max();
    if (lo < 0.0 || hi > 1.0 || !gt.depth.all_finite())
      throw InvalidArgument("ground-truth depth must lie in [0,1]");
  }

  const int rows = spec.texture.height(), cols = spec.texture.width(), nc = spec.texture.channels();
  const auto positions = uniform_focus_positions(spec.slice_count);

  FocalStack stack;
  stack.slices.assign(spec.slice_count, Image(rows, cols, nc));
  stack.focus_positions = positions;

  for (int k = 0; k < spec.slice_count; ++k) {
    const double xk = positions[k];
    Image& slice = stack.slices[k];
    parallel_for(0, rows, [&](int i) {
      std::vector<double> w;
      for (int j = 0; j < cols; ++j) {
        const double sigma = spec.psf_gain * std::abs(xk - gt.depth.at(i, j));
        for (int c = 0; c < nc; ++c) {
          const Field2D& tex = spec.texture.planes[c];
          double v;
          if (sigma < 0.3) {
            v = tex.at(i, j);
          } else {
            const int r = static_cast<int>(std::ceil(4.0 * sigma));
            const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
            w.resize(2 * r + 1);
            for (int t = -r; t <= r; ++t) w[t + r] = std::exp(-t * t * inv2s2);
            double acc = 0.0, wsum = 0.0;
            const int i0 = std::max(0, i - r), i1 = std::min(rows - 1, i + r);
            const int j0 = std::max(0, j - r), j1 = std::min(cols - 1, j + r);
            for (int ii = i0; ii <= i1; ++ii) {
              const double wi = w[ii - i + r];
              const double* row = tex.row(ii);
              double racc = 0.0, rw = 0.0;
              for (int jj = j0; jj <= j1; ++jj) {
                const double wj = w[jj - j + r];
                racc += wj * row[jj];
                rw += wj;
              }
              acc += wi * racc;
              wsum += wi * rw;
            }
            v = acc / wsum;
          }
          if (spec.noise_a > 0.0 || spec.noise_b > 0.0) {
            const double sd = std::sqrt(spec.noise_a * v + spec.noise_b);
            v += sd * rng::normal(rng::key(spec.seed, k, static_cast<uint64_t>(i),
                                           static_cast<uint64_t>(j), c));
          }
          slice.planes[c].at(i, j) = std::clamp(v, 0.0, 1.0);
        }
      }
    });
  }
  return stack;
}

std::pair<double, double> score(const DepthMap& est, const GroundTruth& gt, ScoreUnits units,
                                int slice_count) {
  if (!est.same_shape(gt.depth)) throw InvalidArgument("estimate and truth dimensions disagree");
  const double scale = units == ScoreUnits::Slices ? slice_count - 1 : 1.0;
  double s = 0.0;
  for (int i = 0; i < est.rows(); ++i)
    for (int j = 0; j < est.cols(); ++j) {
      const double e = scale * (est.at(i, j) - gt.depth.at(i, j));
      s += e * e;
    }
  const double mse = s / est.size();
  return {mse, std::sqrt(mse)};
}

}  // namespace dff
