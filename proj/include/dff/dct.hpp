// Copyright (c) 2026 the dff authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "dff/field.hpp"

namespace dff {

/// Fast solver for (lambda K^T K + I) d = rhs, where K is the forward
/// difference gradient with Neumann boundary; K^T K is then the 5-point
/// Neumann Laplacian, which the type-II cosine transform diagonalizes with
/// eigenvalues 4 sin^2(pi p / 2n) + 4 sin^2(pi q / 2m). Plans and buffers
/// are reused across calls for one grid size.
class DctSolver {
 public:
  DctSolver(int rows, int cols);
  ~DctSolver();
  DctSolver(const DctSolver&) = delete;
  DctSolver& operator=(const DctSolver&) = delete;

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  /// Throws InvalidPenalty for lambda <= 0. Relative residual of the
  /// returned solution is at transform round-off (~1e-15).
  void solve(const Field2D& rhs, double lambda, Field2D& out);

 private:
  int rows_, cols_;
  std::vector<double> buf_;
  std::vector<double> row_eig_, col_eig_;
  void* plan_fwd_;
  void* plan_bwd_;
};

/// One-shot convenience wrapper.
Field2D dct_solve(const Field2D& rhs, double lambda);

}  // namespace dff
