// Copyright (c) 2026 the dff authors
// SPDX-License-Identifier: Apache-2.0

#include "dff/classical.hpp"

#include <cmath>

#include "dff/errors.hpp"
#include "dff/filters.hpp"
#include "dff/parallel.hpp"

namespace dff {

std::vector<int> argmax_indices(const ContrastVolume& volume) {
  const int rows = volume.rows(), cols = volume.cols(), s = volume.size();
  std::vector<int> idx(static_cast<size_t>(rows) * cols, 0);
  parallel_for(0, rows, [&](int i) {
    for (int j = 0; j < cols; ++j) {
      int best = 0;
      double bestv = volume.slices[0].at(i, j);
      for (int k = 1; k < s; ++k) {
        const double v = volume.slices[k].at(i, j);
        if (v > bestv) {  // strict: ties keep the smaller index
          bestv = v;
          best = k;
        }
      }
      idx[static_cast<size_t>(i) * cols + j] = best;
    }
  });
  return idx;
}

DepthMap argmax_depth(const ContrastVolume& volume, const std::vector<double>& positions) {
  if (static_cast<int>(positions.size()) != volume.size())
    throw InvalidArgument("focus position count does not match volume");
  const auto idx = argmax_indices(volume);
  const int rows = volume.rows(), cols = volume.cols();
  DepthMap d(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) d.at(i, j) = positions[idx[static_cast<size_t>(i) * cols + j]];
  return d;
}

DepthMap gaussian_3pt_refine(const ContrastVolume& volume, const std::vector<double>& positions,
                             const std::vector<int>& peak_index) {
  const int rows = volume.rows(), cols = volume.cols(), s = volume.size();
  if (static_cast<int>(positions.size()) != s)
    throw InvalidArgument("focus position count does not match volume");
  if (peak_index.size() != static_cast<size_t>(rows) * cols)
    throw InvalidArgument("peak index map does not match volume dimensions");
  DepthMap d(rows, cols);
  parallel_for(0, rows, [&](int i) {
    for (int j = 0; j < cols; ++j) {
      const int k = peak_index[static_cast<size_t>(i) * cols + j];
      double depth = positions[k];
      if (k >= 1 && k <= s - 2) {
        const double cm = volume.slices[k - 1].at(i, j);
        const double c0 = volume.slices[k].at(i, j);
        const double cp = volume.slices[k + 1].at(i, j);
        if (cm > 0.0 && cp > 0.0 && c0 > cm && c0 > cp) {
          const double lm = std::log(cm), l0 = std::log(c0), lp = std::log(cp);
          const double denom = 2.0 * lm - 4.0 * l0 + 2.0 * lp;
          if (denom < 0.0) {
            const double spacing = 0.5 * (positions[k + 1] - positions[k - 1]);
            depth += spacing * (lm - lp) / denom;
          }
        }
      }
      d.at(i, j) = depth;
    }
  });
  return d;
}

DepthMap baseline_pipeline(const FocalStack& stack, int contrast_window,
                           std::optional<int> median_window) {
  ContrastVolume vol = mlap(stack);
  if (contrast_window != 1) vol = filter_contrast(vol, contrast_window);
  const auto idx = argmax_indices(vol);
  DepthMap d = gaussian_3pt_refine(vol, stack.focus_positions, idx);
  if (median_window) d = median_filter(d, *median_window);
  return d;
}

}  // namespace dff
