// Copyright (c) 2026 the dff authors
// SPDX-License-Identifier: Apache-2.0

#include "dff/filters.hpp"

#include <algorithm>
#include <cmath>

#include "dff/errors.hpp"
#include "dff/parallel.hpp"

namespace dff {

namespace {

void check_window(int w) {
  if (w < 1 || w % 2 == 0) throw InvalidWindow("window side length must be odd and positive");
}

inline int clampi(int i, int n) { return i < 0 ? 0 : (i >= n ? n - 1 : i); }

// Sliding box sum along x with replicate padding, one row at a time.
void box_sum_x(const Field2D& in, int r, Field2D& out) {
  const int rows = in.rows(), cols = in.cols();
  parallel_for(0, rows, [&](int i) {
    const double* src = in.row(i);
    double* dst = out.row(i);
    double s = 0.0;
    for (int dj = -r; dj <= r; ++dj) s += src[clampi(dj, cols)];
    dst[0] = s;
    for (int j = 1; j < cols; ++j) {
      s += src[clampi(j + r, cols)] - src[clampi(j - r - 1, cols)];
      dst[j] = s;
    }
  });
}

void box_sum_y(const Field2D& in, int r, Field2D& out) {
  const int rows = in.rows(), cols = in.cols();
  // Column-direction sliding sums, parallel over column stripes.
  const int stripe = 64;
  const int nstripes = (cols + stripe - 1) / stripe;
  parallel_for(0, nstripes, [&](int s) {
    const int j0 = s * stripe;
    const int j1 = std::min(cols, j0 + stripe);
    std::vector<double> acc(j1 - j0, 0.0);
    for (int di = -r; di <= r; ++di) {
      const double* src = in.row(clampi(di, rows));
      for (int j = j0; j < j1; ++j) acc[j - j0] += src[j];
    }
    for (int j = j0; j < j1; ++j) out.at(0, j) = acc[j - j0];
    for (int i = 1; i < rows; ++i) {
      const double* add = in.row(clampi(i + r, rows));
      const double* del = in.row(clampi(i - r - 1, rows));
      for (int j = j0; j < j1; ++j) {
        acc[j - j0] += add[j] - del[j];
        out.at(i, j) = acc[j - j0];
      }
    }
  });
}

}  // namespace

Field2D mean_filter(const Field2D& field, int window) {
  check_window(window);
  if (window == 1) return field;
  const int r = window / 2;
  Field2D tmp(field.rows(), field.cols());
  box_sum_x(field, r, tmp);
  Field2D out(field.rows(), field.cols());
  box_sum_y(tmp, r, out);
  const double inv = 1.0 / (static_cast<double>(window) * window);
  double* p = out.data();
  for (size_t i = 0; i < out.size(); ++i) p[i] *= inv;
  return out;
}

Field2D median_filter(const Field2D& field, int window) {
  check_window(window);
  if (window == 1) return field;
  const int r = window / 2;
  const int rows = field.rows(), cols = field.cols();
  Field2D out(rows, cols);
  parallel_for(0, rows, [&](int i) {
    std::vector<double> buf;
    buf.reserve(static_cast<size_t>(window) * window);
    for (int j = 0; j < cols; ++j) {
      buf.clear();
      for (int di = -r; di <= r; ++di) {
        const double* src = field.row(clampi(i + di, rows));
        for (int dj = -r; dj <= r; ++dj) buf.push_back(src[clampi(j + dj, cols)]);
      }
      auto mid = buf.begin() + buf.size() / 2;  // w*w is odd
      std::nth_element(buf.begin(), mid, buf.end());
      out.at(i, j) = *mid;
    }
  });
  return out;
}

Field2D convolve_1d_axis(const Field2D& field, const std::vector<double>& kernel, Axis axis) {
  if (kernel.empty() || kernel.size() % 2 == 0)
    throw InvalidKernel("kernel length must be odd and positive");
  const int r = static_cast<int>(kernel.size()) / 2;
  const int rows = field.rows(), cols = field.cols();
  Field2D out(rows, cols);
  if (axis == Axis::X) {
    parallel_for(0, rows, [&](int i) {
      const double* src = field.row(i);
      double* dst = out.row(i);
      for (int j = 0; j < cols; ++j) {
        double s = 0.0;
        for (int k = -r; k <= r; ++k) s += kernel[k + r] * src[clampi(j + k, cols)];
        dst[j] = s;
      }
    });
  } else {
    parallel_for(0, rows, [&](int i) {
      double* dst = out.row(i);
      for (int k = -r; k <= r; ++k) {
        const double* src = field.row(clampi(i + k, rows));
        const double w = kernel[k + r];
        if (k == -r) {
          for (int j = 0; j < cols; ++j) dst[j] = w * src[j];
        } else {
          for (int j = 0; j < cols; ++j) dst[j] += w * src[j];
        }
      }
    });
  }
  return out;
}

}  // namespace dff
