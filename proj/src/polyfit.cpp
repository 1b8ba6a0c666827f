// Copyright (c) 2026 the dff authors
// SPDX-License-Identifier: Apache-2.0

#include "dff/polyfit.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include <Eigen/Dense>

#include "dff/errors.hpp"
#include "dff/kernels.hpp"
#include "dff/parallel.hpp"

namespace dff {

namespace {

// Design matrix in the Chebyshev basis over [0,1] (t = 2x - 1); the
// monomial Vandermonde at degree 8 is usable but needlessly ill
// conditioned.
Eigen::MatrixXd design_matrix(const std::vector<double>& positions, int degree) {
  const int s = static_cast<int>(positions.size());
  Eigen::MatrixXd b(s, degree + 1);
  for (int k = 0; k < s; ++k) {
    const double t = 2.0 * positions[k] - 1.0;
    double tm2 = 1.0, tm1 = t;
    b(k, 0) = 1.0;
    if (degree >= 1) b(k, 1) = t;
    for (int c = 2; c <= degree; ++c) {
      const double tc = 2.0 * t * tm1 - tm2;
      b(k, c) = tc;
      tm2 = tm1;
      tm1 = tc;
    }
  }
  return b;
}

}  // namespace

ContrastCurveField fit_curves(const ContrastVolume& volume, const std::vector<double>& positions,
                              int degree) {
  const int s = volume.size();
  if (degree < 0) throw InvalidArgument("polynomial degree must be nonnegative");
  if (s < degree + 1) throw Underdetermined("need at least degree+1 contrast slices");
  if (static_cast<int>(positions.size()) != s)
    throw InvalidArgument("focus position count does not match volume");
  for (size_t k = 0; k < positions.size(); ++k) {
    if (positions[k] < 0.0 || positions[k] > 1.0)
      throw InvalidArgument("focus positions must lie in [0,1]");
    if (k > 0 && !(positions[k] > positions[k - 1]))
      throw InvalidArgument("focus positions must be strictly increasing");
  }

  const Eigen::MatrixXd b = design_matrix(positions, degree);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (!(sv(sv.size() - 1) > 0.0) || sv(0) / sv(sv.size() - 1) > 1e12)
    throw IllConditionedFit("design matrix condition estimate exceeds 1e12");
  // Pseudo-inverse, applied per pixel as a plane linear combination.
  const Eigen::MatrixXd pinv =
      svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().transpose();

  const int rows = volume.rows(), cols = volume.cols();
  ContrastCurveField field;
  field.degree = degree;
  field.basis = CurveBasis::Chebyshev01;
  field.coeffs.assign(degree + 1, Field2D(rows, cols, 0.0));

  const auto& kops = kernels::ops();
  parallel_for(0, rows, [&](int i) {
    for (int c = 0; c <= degree; ++c) {
      double* out = field.coeffs[c].row(i);
      if (s == 1) {
        kops.axpby(cols, pinv(c, 0), volume.slices[0].row(i), 0.0, volume.slices[0].row(i), out);
        continue;
      }
      kops.axpby(cols, pinv(c, 0), volume.slices[0].row(i), pinv(c, 1), volume.slices[1].row(i),
                 out);
      for (int k = 2; k < s; ++k)
        kops.axpby(cols, 1.0, out, pinv(c, k), volume.slices[k].row(i), out);
    }
  });
  return field;
}

void ContrastCurveField::eval_row(int i, const double* x, double lo, double hi, double* val,
                                  double* dval) const {
  const int nc = degree + 1;
  std::vector<const double*> planes(nc);
  for (int c = 0; c < nc; ++c) planes[c] = coeffs[c].row(i);
  const auto& kops = kernels::ops();
  if (basis == CurveBasis::Chebyshev01)
    kops.cheb_eval_row(cols(), nc, planes.data(), x, lo, hi, val, dval);
  else
    kops.poly_eval_row(cols(), nc, planes.data(), x, lo, hi, val, dval);
}

namespace {

const double kNoClampLo = -1e300;
const double kNoClampHi = 1e300;

}  // namespace

double eval_curve(const ContrastCurveField& field, int i, int j, double x) {
  const int nc = field.degree + 1;
  std::vector<const double*> planes(nc);
  for (int c = 0; c < nc; ++c) planes[c] = field.coeffs[c].row(i) + j;
  double v;
  const auto& kops = kernels::scalar_ops();
  if (field.basis == CurveBasis::Chebyshev01)
    kops.cheb_eval_row(1, nc, planes.data(), &x, kNoClampLo, kNoClampHi, &v, nullptr);
  else
    kops.poly_eval_row(1, nc, planes.data(), &x, kNoClampLo, kNoClampHi, &v, nullptr);
  return v;
}

double eval_curve_derivative(const ContrastCurveField& field, int i, int j, double x) {
  const int nc = field.degree + 1;
  std::vector<const double*> planes(nc);
  for (int c = 0; c < nc; ++c) planes[c] = field.coeffs[c].row(i) + j;
  double v;
  const auto& kops = kernels::scalar_ops();
  if (field.basis == CurveBasis::Chebyshev01)
    kops.cheb_eval_row(1, nc, planes.data(), &x, kNoClampLo, kNoClampHi, nullptr, &v);
  else
    kops.poly_eval_row(1, nc, planes.data(), &x, kNoClampLo, kNoClampHi, nullptr, &v);
  return v;
}

void dump_curves(const ContrastCurveField& field, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write curve dump: " + path);
  const char magic[8] = {'D', 'F', 'F', 'C', 'R', 'V', '0', '1'};
  out.write(magic, 8);
  const int32_t hdr[4] = {static_cast<int32_t>(field.rows()), static_cast<int32_t>(field.cols()),
                          static_cast<int32_t>(field.degree),
                          field.basis == CurveBasis::Chebyshev01 ? 1 : 0};
  out.write(reinterpret_cast<const char*>(hdr), sizeof(hdr));
  const int nc = field.degree + 1;
  std::vector<double> pix(nc);
  for (int i = 0; i < field.rows(); ++i)
    for (int j = 0; j < field.cols(); ++j) {
      for (int c = 0; c < nc; ++c) pix[c] = field.coeffs[c].at(i, j);
      out.write(reinterpret_cast<const char*>(pix.data()), nc * sizeof(double));
    }
  if (!out) throw IoError("write failed: " + path);
}

ContrastCurveField load_curves(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read curve dump: " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, "DFFCRV01", 8) != 0)
    throw IoError("bad curve dump header: " + path);
  int32_t hdr[4];
  in.read(reinterpret_cast<char*>(hdr), sizeof(hdr));
  if (!in || hdr[0] < 1 || hdr[1] < 1 || hdr[2] < 0) throw IoError("bad curve dump dims: " + path);
  ContrastCurveField field;
  field.degree = hdr[2];
  field.basis = hdr[3] == 1 ? CurveBasis::Chebyshev01 : CurveBasis::Monomial;
  const int nc = field.degree + 1;
  field.coeffs.assign(nc, Field2D(hdr[0], hdr[1], 0.0));
  std::vector<double> pix(nc);
  for (int i = 0; i < hdr[0]; ++i)
    for (int j = 0; j < hdr[1]; ++j) {
      in.read(reinterpret_cast<char*>(pix.data()), nc * sizeof(double));
      for (int c = 0; c < nc; ++c) field.coeffs[c].at(i, j) = pix[c];
    }
  if (!in) throw IoError("truncated curve dump: " + path);
  return field;
}

}  // namespace dff
