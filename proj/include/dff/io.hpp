// Copyright (c) 2026 the dff authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include "dff/field.hpp"

namespace dff {

/// 32-bit little-endian PFM (grayscale "Pf"), rows bottom-to-top per the
/// format convention. Writes are bit-exact functions of the field contents.
void save_pfm(const Field2D& field, const std::string& path);
Field2D load_pfm(const std::string& path);

/// Color-mapped 8-bit PNG visualization of a depth map: values are min-max
/// normalized and mapped blue (near) through green to red (far).
void save_depth_png(const DepthMap& depth, const std::string& path);

/// RFC-4180 CSV with a header row; every row must match the header arity.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void write_row(const std::vector<std::string>& fields);
  ~CsvWriter();

 private:
  struct Impl;
  Impl* impl_;
};

std::string csv_quote(const std::string& s);

/// Shortest decimal round-trip formatting for doubles in CSV/manifests.
std::string format_double(double v);

/// Flat key=value run manifest: all effective parameters of a run, written
/// in sorted key order so identical configurations give identical bytes.
struct Manifest {
  std::map<std::string, std::string> entries;

  void set(const std::string& key, const std::string& value) { entries[key] = value; }
  void set(const std::string& key, double value) { entries[key] = format_double(value); }
  void set(const std::string& key, int value) { entries[key] = std::to_string(value); }
  void save(const std::string& path) const;
  static Manifest load(const std::string& path);
};

}  // namespace dff
