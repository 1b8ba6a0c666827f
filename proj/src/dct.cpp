// Copyright (c) 2026 the dff authors
// SPDX-License-Identifier: Apache-2.0

#include "dff/dct.hpp"

#include <cmath>
#include <cstring>
#include <mutex>

#include <fftw3.h>

#include "dff/errors.hpp"
#include "dff/kernels.hpp"

namespace dff {

namespace {
// FFTW planning is not reentrant.
std::mutex g_fftw_mutex;
}  // namespace

DctSolver::DctSolver(int rows, int cols)
    : rows_(rows), cols_(cols), buf_(static_cast<size_t>(rows) * cols) {
  if (rows < 1 || cols < 1) throw InvalidArgument("DctSolver: dimensions must be positive");
  row_eig_.resize(rows);
  col_eig_.resize(cols);
  for (int p = 0; p < rows; ++p) {
    const double s = std::sin(M_PI * p / (2.0 * rows));
    row_eig_[p] = 4.0 * s * s;
  }
  for (int q = 0; q < cols; ++q) {
    const double s = std::sin(M_PI * q / (2.0 * cols));
    col_eig_[q] = 4.0 * s * s;
  }
  std::lock_guard<std::mutex> lock(g_fftw_mutex);
  // FFTW_ESTIMATE keeps planning deterministic (no timing-dependent choices).
  plan_fwd_ = fftw_plan_r2r_2d(rows, cols, buf_.data(), buf_.data(), FFTW_REDFT10, FFTW_REDFT10,
                               FFTW_ESTIMATE);
  plan_bwd_ = fftw_plan_r2r_2d(rows, cols, buf_.data(), buf_.data(), FFTW_REDFT01, FFTW_REDFT01,
                               FFTW_ESTIMATE);
  if (!plan_fwd_ || !plan_bwd_) throw Error("FFTW planning failed");
}

DctSolver::~DctSolver() {
  std::lock_guard<std::mutex> lock(g_fftw_mutex);
  fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

void DctSolver::solve(const Field2D& rhs, double lambda, Field2D& out) {
  if (!(lambda > 0.0)) throw InvalidPenalty("penalty must be positive");
  if (rhs.rows() != rows_ || rhs.cols() != cols_)
    throw InvalidArgument("DctSolver: rhs shape mismatch");
  std::memcpy(buf_.data(), rhs.data(), buf_.size() * sizeof(double));
  fftw_execute(static_cast<fftw_plan>(plan_fwd_));
  // Forward/backward REDFT pair scales by 4*n*m; fold into the divisor.
  const double scale = 1.0 / (4.0 * rows_ * cols_);
  const auto& k = kernels::ops();
  for (int p = 0; p < rows_; ++p)
    k.spectral_scale_row(cols_, scale, lambda, row_eig_[p], col_eig_.data(),
                         buf_.data() + static_cast<size_t>(p) * cols_);
  fftw_execute(static_cast<fftw_plan>(plan_bwd_));
  if (!out.same_shape(rhs)) out = Field2D(rows_, cols_);
  std::memcpy(out.data(), buf_.data(), buf_.size() * sizeof(double));
}

Field2D dct_solve(const Field2D& rhs, double lambda) {
  DctSolver solver(rhs.rows(), rhs.cols());
  Field2D out(rhs.rows(), rhs.cols());
  solver.solve(rhs, lambda, out);
  return out;
}

}  // namespace dff
