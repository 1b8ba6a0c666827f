// Copyright (c) 2026 the dff authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "dff/errors.hpp"

namespace dff {

/// Dense row-major 2-D grid of doubles. The basic currency of every module:
/// image channels, contrast slices, depth maps and dual variables are all
/// Field2D instances.
class Field2D {
 public:
  Field2D() = default;
  Field2D(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {
    if (rows < 1 || cols < 1) throw InvalidArgument("Field2D: dimensions must be positive");
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  size_t size() const { return data_.size(); }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double* row(int i) { return data_.data() + static_cast<size_t>(i) * cols_; }
  const double* row(int i) const { return data_.data() + static_cast<size_t>(i) * cols_; }

  double& at(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
  double at(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

  void fill(double v) { data_.assign(data_.size(), v); }

  bool same_shape(const Field2D& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  bool all_finite() const {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  std::pair<double, double> min_max() const {
    double lo = data_[0], hi = data_[0];
    for (double v : data_) {
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
    return {lo, hi};
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

/// Depth values in normalized focus coordinates; a plain scalar field.
using DepthMap = Field2D;

/// Forward-difference gradient pair (x and y components of Kd).
struct GradientField {
  Field2D gx;
  Field2D gy;

  GradientField() = default;
  GradientField(int rows, int cols) : gx(rows, cols), gy(rows, cols) {}

  int rows() const { return gx.rows(); }
  int cols() const { return gx.cols(); }
  bool same_shape(const GradientField& o) const {
    return gx.same_shape(o.gx) && gy.same_shape(o.gy);
  }
};

}  // namespace dff
