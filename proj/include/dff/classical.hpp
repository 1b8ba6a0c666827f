// Copyright (c) 2026 the dff authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "dff/contrast.hpp"
#include "dff/field.hpp"
#include "dff/image.hpp"

namespace dff {

/// Per-pixel index of the contrast maximum; ties break toward the smaller
/// slice index.
std::vector<int> argmax_indices(const ContrastVolume& volume);

/// Depth at the per-pixel contrast maximum, in focus coordinates.
DepthMap argmax_depth(const ContrastVolume& volume, const std::vector<double>& positions);

/// Sub-slice refinement: fits a Gaussian through the peak slice and its two
/// neighbors via a log-parabola. Pixels whose peak sits at a stack boundary,
/// whose stencil contains nonpositive contrast, or whose maximum is not
/// strict keep the unrefined depth.
DepthMap gaussian_3pt_refine(const ContrastVolume& volume, const std::vector<double>& positions,
                             const std::vector<int>& peak_index);

/// Full classical estimator: MLAP -> contrast mean filter (contrast_window)
/// -> refined argmax -> optional median filter on the depth map.
DepthMap baseline_pipeline(const FocalStack& stack, int contrast_window,
                           std::optional<int> median_window);

}  // namespace dff
