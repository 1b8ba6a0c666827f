// Copyright (c) 2026 the dff authors
// SPDX-License-Identifier: Apache-2.0

#include "dff/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "dff/errors.hpp"

namespace dff {

void save_pfm(const Field2D& field, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write PFM: " + path);
  out << "Pf\n" << field.cols() << " " << field.rows() << "\n-1.0\n";
  std::vector<float> row(field.cols());
  for (int i = field.rows() - 1; i >= 0; --i) {  // bottom-to-top
    const double* src = field.row(i);
    for (int j = 0; j < field.cols(); ++j) row[j] = static_cast<float>(src[j]);
    out.write(reinterpret_cast<const char*>(row.data()), row.size() * sizeof(float));
  }
  if (!out) throw IoError("write failed: " + path);
}

Field2D load_pfm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read PFM: " + path);
  std::string tag;
  int cols = 0, rows = 0;
  double scale = 0.0;
  in >> tag >> cols >> rows >> scale;
  if (!in || tag != "Pf" || cols < 1 || rows < 1 || scale == 0.0)
    throw IoError("bad PFM header: " + path);
  in.get();  // single whitespace after the scale line
  Field2D field(rows, cols);
  std::vector<float> row(cols);
  for (int i = rows - 1; i >= 0; --i) {
    in.read(reinterpret_cast<char*>(row.data()), row.size() * sizeof(float));
    if (!in) throw IoError("truncated PFM: " + path);
    if (scale > 0.0)  // big-endian payload
      for (auto& v : row) {
        uint32_t u;
        std::memcpy(&u, &v, 4);
        u = __builtin_bswap32(u);
        std::memcpy(&v, &u, 4);
      }
    double* dst = field.row(i);
    for (int j = 0; j < cols; ++j) dst[j] = row[j];
  }
  return field;
}

namespace {

// Blue -> cyan -> green -> yellow -> red over [0,1].
void colormap(double u, uint8_t& r, uint8_t& g, uint8_t& b) {
  u = std::clamp(u, 0.0, 1.0);
  const double v = 4.0 * u;
  auto chan = [](double x) {
    return static_cast<uint8_t>(std::lround(std::clamp(x, 0.0, 1.0) * 255.0));
  };
  r = chan(std::min(v - 1.5, -v + 4.5));
  g = chan(std::min(v - 0.5, -v + 3.5));
  b = chan(std::min(v + 0.5, -v + 2.5));
}

}  // namespace

void save_depth_png(const DepthMap& depth, const std::string& path) {
  auto [lo, hi] = depth.min_max();
  const double span = hi > lo ? hi - lo : 1.0;
  cv::Mat img(depth.rows(), depth.cols(), CV_8UC3);
  for (int i = 0; i < depth.rows(); ++i) {
    cv::Vec3b* dst = img.ptr<cv::Vec3b>(i);
    for (int j = 0; j < depth.cols(); ++j) {
      uint8_t r, g, b;
      colormap((depth.at(i, j) - lo) / span, r, g, b);
      dst[j] = cv::Vec3b(b, g, r);  // OpenCV stores BGR
    }
  }
  if (!cv::imwrite(path, img)) throw IoError("cannot write PNG: " + path);
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    q += c;
    if (c == '"') q += '"';
  }
  q += '"';
  return q;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

struct CsvWriter::Impl {
  std::ofstream out;
  size_t arity;
};

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : impl_(new Impl{std::ofstream(path, std::ios::binary), header.size()}) {
  if (!impl_->out) {
    delete impl_;
    throw IoError("cannot write CSV: " + path);
  }
  write_row(header);
}

void CsvWriter::write_row(const std::vector<std::string>& fields) {
  if (fields.size() != impl_->arity) throw InvalidArgument("CSV row arity mismatch");
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) impl_->out << ',';
    impl_->out << csv_quote(fields[i]);
  }
  impl_->out << "\r\n";
}

CsvWriter::~CsvWriter() { delete impl_; }

void Manifest::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write manifest: " + path);
  for (const auto& [k, v] : entries) out << k << "=" << v << "\n";
  if (!out) throw IoError("write failed: " + path);
}

Manifest Manifest::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read manifest: " + path);
  Manifest m;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    m.entries[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return m;
}

}  // namespace dff
