// Copyright (c) 2026 the dff authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "dff/field.hpp"
#include "dff/image.hpp"

namespace dff {

enum class Shape { Cone, Plane, Cosine, Sphere };

Shape parse_shape(const std::string& name);  // throws InvalidShape
std::string shape_name(Shape s);

/// Scene description for the synthetic benchmark: a texture viewed under a
/// known depth profile, rendered through depth-dependent Gaussian defocus
/// with mixed signal-dependent/independent noise.
struct SceneSpec {
  Image texture;
  Shape shape = Shape::Cone;
  int slice_count = 15;
  double noise_a = 1e-4;   // variance coefficient on the signal
  double noise_b = 1e-5;   // signal-independent variance
  double psf_gain = 3.5;   // blur sigma in pixels per unit defocus
  uint64_t seed = 0;
};

struct GroundTruth {
  DepthMap depth;  // in [0,1], matches the texture dimensions
};

/// Analytic depth profiles over a dims.first x dims.second grid, all
/// spanning [0,1]: cone (apex 1 at the center, 0 at the rim), tilted plane,
/// one full cosine period along x, upper hemisphere cap.
GroundTruth make_depth(Shape shape, int rows, int cols);

/// Renders the focal stack: slice k blurs the texture per pixel with an
/// isotropic Gaussian of sigma = psf_gain * |x_k - depth|, truncated at 4
/// sigma and normalized over the in-image support (sigma < 0.3 px is an
/// identity), then adds sqrt(a*sample + b) * N(0,1) noise, clipped to
/// [0,1]. Deterministic given the seed, also under parallel rendering.
FocalStack render_stack(const SceneSpec& spec, const GroundTruth& gt);

/// Mean squared error and its root between an estimate and the truth.
/// Slice units scale the normalized difference by (slice_count - 1).
enum class ScoreUnits { Normalized, Slices };
std::pair<double, double> score(const DepthMap& est, const GroundTruth& gt, ScoreUnits units,
                                int slice_count);

/// Multi-octave value-noise texture with spatially varying texture
/// strength, including weakly textured patches. Deterministic in the seed.
Image procedural_texture(int rows, int cols, uint64_t seed, bool with_weak_patches = true);

}  // namespace dff
