// Copyright (c) 2026 the dff authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "dff/field.hpp"

namespace dff {

enum class Axis { X, Y };

/// Windowed arithmetic mean with replicate (clamp-to-edge) padding.
/// w must be odd and positive; w = 1 is the identity.
Field2D mean_filter(const Field2D& field, int window);

/// Windowed median, same padding and window rules as mean_filter.
Field2D median_filter(const Field2D& field, int window);

/// Discrete correlation with an odd-length tap vector along one axis,
/// replicate padding. kernel = {1} is the identity.
Field2D convolve_1d_axis(const Field2D& field, const std::vector<double>& kernel, Axis axis);

}  // namespace dff
