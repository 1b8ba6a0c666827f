// Copyright (c) 2026 the dff authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "dff/field.hpp"
#include "dff/image.hpp"

namespace dff {

/// Per-pixel, per-slice nonnegative sharpness values.
struct ContrastVolume {
  std::vector<Field2D> slices;

  int size() const { return static_cast<int>(slices.size()); }
  int rows() const { return slices.empty() ? 0 : slices[0].rows(); }
  int cols() const { return slices.empty() ? 0 : slices[0].cols(); }
};

/// Modified-Laplacian sharpness: per pixel and slice, the sum over color
/// channels of |second difference along x| + |second difference along y|,
/// three-tap stencil, replicate boundary.
ContrastVolume mlap(const FocalStack& stack);

/// Mean-filters every slice independently (window odd; 1 = identity).
ContrastVolume filter_contrast(const ContrastVolume& volume, int window);

/// Positive factor that maps the volume's 99th-percentile value to
/// `target`, or 1 when the volume is all zero. Scaling contrast by this
/// factor pins the data term of the variational energy to a standard
/// operating scale, so regularization weights and step sizes transfer
/// across inputs with different absolute sharpness.
double contrast_normalization(const ContrastVolume& volume, double target);

/// In-place multiplication of every value.
void scale_contrast(ContrastVolume& volume, double factor);

/// Min-max normalized grayscale export of one slice, for inspection.
void export_contrast_slice(const ContrastVolume& volume, int slice, const std::string& png_path);

}  // namespace dff
