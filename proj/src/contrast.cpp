// Copyright (c) 2026 the dff authors
// SPDX-License-Identifier: Apache-2.0

#include "dff/contrast.hpp"

#include <algorithm>
#include <vector>

#include "dff/errors.hpp"
#include "dff/filters.hpp"
#include "dff/kernels.hpp"
#include "dff/parallel.hpp"

namespace dff {

ContrastVolume mlap(const FocalStack& stack) {
  stack.validate();
  const int rows = stack.height(), cols = stack.width(), nslices = stack.size();
  ContrastVolume vol;
  vol.slices.assign(nslices, Field2D(rows, cols, 0.0));
  const auto& k = kernels::ops();
  parallel_for(0, nslices, [&](int s) {
    Field2D& acc = vol.slices[s];
    for (const Field2D& plane : stack.slices[s].planes) {
      for (int i = 0; i < rows; ++i) {
        k.abs_sdiff_x_accum(cols, plane.row(i), acc.row(i));
        const double* up = plane.row(i > 0 ? i - 1 : 0);
        const double* dn = plane.row(i < rows - 1 ? i + 1 : rows - 1);
        k.abs_sdiff_y_accum(cols, up, plane.row(i), dn, acc.row(i));
      }
    }
  });
  return vol;
}

ContrastVolume filter_contrast(const ContrastVolume& volume, int window) {
  ContrastVolume out;
  out.slices.reserve(volume.size());
  for (const auto& s : volume.slices) out.slices.push_back(mean_filter(s, window));
  return out;
}

double contrast_normalization(const ContrastVolume& volume, double target) {
  if (!(target > 0.0)) throw InvalidArgument("normalization target must be positive");
  std::vector<double> values;
  values.reserve(static_cast<size_t>(volume.size()) * volume.rows() * volume.cols());
  for (const auto& s : volume.slices)
    values.insert(values.end(), s.data(), s.data() + s.size());
  auto nth = values.begin() + static_cast<size_t>(values.size() * 0.99);
  if (nth >= values.end()) nth = values.end() - 1;
  std::nth_element(values.begin(), nth, values.end());
  return *nth > 1e-300 ? target / *nth : 1.0;
}

void scale_contrast(ContrastVolume& volume, double factor) {
  for (auto& s : volume.slices) {
    double* p = s.data();
    for (size_t i = 0; i < s.size(); ++i) p[i] *= factor;
  }
}

void export_contrast_slice(const ContrastVolume& volume, int slice, const std::string& png_path) {
  if (slice < 0 || slice >= volume.size()) throw InvalidArgument("slice index out of range");
  const Field2D& f = volume.slices[slice];
  auto [lo, hi] = f.min_max();
  const double span = hi > lo ? hi - lo : 1.0;
  Image img(f.rows(), f.cols(), 1);
  for (int i = 0; i < f.rows(); ++i)
    for (int j = 0; j < f.cols(); ++j) img.planes[0].at(i, j) = (f.at(i, j) - lo) / span;
  save_image_png(img, png_path);
}

}  // namespace dff
