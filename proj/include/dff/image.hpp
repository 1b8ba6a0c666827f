// Copyright (c) 2026 the dff authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "dff/field.hpp"

namespace dff {

/// Multi-channel image with intensities normalized to [0,1]; channels are
/// stored planar. Minimum size 3x3 so second-derivative stencils have
/// support.
struct Image {
  std::vector<Field2D> planes;

  Image() = default;
  Image(int height, int width, int channels, double fill = 0.0);

  int height() const { return planes.empty() ? 0 : planes[0].rows(); }
  int width() const { return planes.empty() ? 0 : planes[0].cols(); }
  int channels() const { return static_cast<int>(planes.size()); }

  /// Enforces the ingestion invariants: >= 3x3, 1 or 3 channels, all
  /// samples finite and in [0,1]. Throws InvalidArgument on violation.
  void validate() const;
};

/// Ordered, co-registered focal slices, front-to-back, with normalized
/// focus coordinates: strictly increasing, first 0, last 1.
struct FocalStack {
  std::vector<Image> slices;
  std::vector<double> focus_positions;

  int size() const { return static_cast<int>(slices.size()); }
  int height() const { return slices.empty() ? 0 : slices[0].height(); }
  int width() const { return slices.empty() ? 0 : slices[0].width(); }
  int channels() const { return slices.empty() ? 0 : slices[0].channels(); }

  /// Checks slice agreement, S >= 3 and the focus-coordinate invariants.
  void validate() const;
};

/// Uniform focus coordinates k/(S-1).
std::vector<double> uniform_focus_positions(int count);

/// Loads images (PNG/PPM/TIFF, 8- or 16-bit, grayscale or color) into a
/// stack with intensities scaled to [0,1] and uniform focus positions.
/// Throws IoError for unreadable files, MismatchedStack on dimension or
/// channel disagreement, TooFewSlices for fewer than 3 paths.
FocalStack load_stack(const std::vector<std::string>& paths);

/// All image files in the directory, lexicographic order.
FocalStack load_stack_dir(const std::string& dir);

/// One path per line, order = focus order; relative paths resolve against
/// the manifest's directory.
FocalStack load_stack_list(const std::string& list_file);

/// Accepts either a directory or a list file.
FocalStack load_stack_auto(const std::string& path);

/// Single image with the same decoding and normalization as load_stack.
Image load_image(const std::string& path);

/// Writes a single image as PNG (16-bit grayscale or color).
void save_image_png(const Image& img, const std::string& path);

}  // namespace dff
