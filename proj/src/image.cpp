// Copyright (c) 2026 the dff authors
// SPDX-License-Identifier: Apache-2.0

#include "dff/image.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "dff/errors.hpp"

namespace fs = std::filesystem;

namespace dff {

Image::Image(int height, int width, int channels, double fill) {
  if (channels != 1 && channels != 3) throw InvalidArgument("image must have 1 or 3 channels");
  planes.reserve(channels);
  for (int c = 0; c < channels; ++c) planes.emplace_back(height, width, fill);
}

void Image::validate() const {
  if (channels() != 1 && channels() != 3) throw InvalidArgument("image must have 1 or 3 channels");
  if (height() < 3 || width() < 3) throw InvalidArgument("image must be at least 3x3");
  for (const auto& p : planes) {
    if (!p.same_shape(planes[0])) throw InvalidArgument("image planes disagree in shape");
    for (size_t i = 0; i < p.size(); ++i) {
      const double v = p.data()[i];
      if (!std::isfinite(v) || v < 0.0 || v > 1.0)
        throw InvalidArgument("image samples must be finite and within [0,1]");
    }
  }
}

void FocalStack::validate() const {
  if (size() < 3) throw TooFewSlices("a focal stack needs at least 3 slices");
  for (const auto& s : slices) {
    s.validate();
    if (s.height() != height() || s.width() != width() || s.channels() != channels())
      throw MismatchedStack("stack slices disagree in dimensions or channels");
  }
  if (static_cast<int>(focus_positions.size()) != size())
    throw MismatchedStack("focus position count does not match slice count");
  if (focus_positions.front() != 0.0 || focus_positions.back() != 1.0)
    throw InvalidArgument("focus positions must span [0,1]");
  for (size_t k = 1; k < focus_positions.size(); ++k)
    if (!(focus_positions[k] > focus_positions[k - 1]))
      throw InvalidArgument("focus positions must be strictly increasing");
}

std::vector<double> uniform_focus_positions(int count) {
  std::vector<double> x(count);
  for (int k = 0; k < count; ++k) x[k] = static_cast<double>(k) / (count - 1);
  x.front() = 0.0;
  x.back() = 1.0;
  return x;
}

namespace {

Image decode_image(const std::string& path) {
  cv::Mat m = cv::imread(path, cv::IMREAD_UNCHANGED | cv::IMREAD_ANYDEPTH | cv::IMREAD_ANYCOLOR);
  if (m.empty()) throw IoError("cannot read image: " + path);
  if (m.channels() == 4) {  // drop alpha
    cv::Mat rgb(m.rows, m.cols, CV_MAKETYPE(m.depth(), 3));
    const int from_to[] = {0, 0, 1, 1, 2, 2};
    cv::mixChannels(&m, 1, &rgb, 1, from_to, 3);
    m = rgb;
  }
  if (m.channels() != 1 && m.channels() != 3)
    throw IoError("unsupported channel count in " + path);

  double scale;
  switch (m.depth()) {
    case CV_8U:
      scale = 1.0 / 255.0;
      break;
    case CV_16U:
      scale = 1.0 / 65535.0;
      break;
    case CV_32F:
      scale = 1.0;
      break;
    default:
      throw IoError("unsupported sample depth in " + path);
  }

  Image img(m.rows, m.cols, m.channels());
  std::vector<cv::Mat> ch;
  cv::split(m, ch);
  for (int c = 0; c < m.channels(); ++c) {
    cv::Mat f;
    ch[c].convertTo(f, CV_64F, scale);
    for (int i = 0; i < m.rows; ++i) {
      const double* src = f.ptr<double>(i);
      double* dst = img.planes[c].row(i);
      for (int j = 0; j < m.cols; ++j) dst[j] = std::clamp(src[j], 0.0, 1.0);
    }
  }
  return img;
}

}  // namespace

Image load_image(const std::string& path) { return decode_image(path); }

FocalStack load_stack(const std::vector<std::string>& paths) {
  if (paths.size() < 3) throw TooFewSlices("need at least 3 image files");
  FocalStack stack;
  stack.slices.reserve(paths.size());
  for (const auto& p : paths) stack.slices.push_back(decode_image(p));
  for (const auto& s : stack.slices) {
    if (s.height() != stack.height() || s.width() != stack.width() ||
        s.channels() != stack.channels())
      throw MismatchedStack("stack slices disagree in dimensions or channels");
  }
  stack.focus_positions = uniform_focus_positions(stack.size());
  stack.validate();
  return stack;
}

FocalStack load_stack_dir(const std::string& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);
  std::vector<std::string> paths;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    auto ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    if (ext == ".png" || ext == ".ppm" || ext == ".pgm" || ext == ".tif" || ext == ".tiff")
      paths.push_back(e.path().string());
  }
  std::sort(paths.begin(), paths.end());
  if (paths.size() < 3) throw TooFewSlices("directory holds fewer than 3 image files: " + dir);
  return load_stack(paths);
}

FocalStack load_stack_list(const std::string& list_file) {
  std::ifstream in(list_file);
  if (!in) throw IoError("cannot open stack list: " + list_file);
  const fs::path base = fs::path(list_file).parent_path();
  std::vector<std::string> paths;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    fs::path p(line);
    paths.push_back(p.is_absolute() ? p.string() : (base / p).string());
  }
  if (paths.size() < 3) throw TooFewSlices("stack list holds fewer than 3 paths: " + list_file);
  return load_stack(paths);
}

FocalStack load_stack_auto(const std::string& path) {
  if (fs::is_directory(path)) return load_stack_dir(path);
  if (fs::is_regular_file(path)) return load_stack_list(path);
  throw IoError("no such stack source: " + path);
}

void save_image_png(const Image& img, const std::string& path) {
  const int h = img.height(), w = img.width(), nc = img.channels();
  std::vector<cv::Mat> ch(nc);
  for (int c = 0; c < nc; ++c) {
    ch[c] = cv::Mat(h, w, CV_16U);
    for (int i = 0; i < h; ++i) {
      const double* src = img.planes[c].row(i);
      uint16_t* dst = ch[c].ptr<uint16_t>(i);
      for (int j = 0; j < w; ++j)
        dst[j] = static_cast<uint16_t>(std::lround(std::clamp(src[j], 0.0, 1.0) * 65535.0));
    }
  }
  cv::Mat out;
  cv::merge(ch, out);
  if (!cv::imwrite(path, out)) throw IoError("cannot write image: " + path);
}

}  // namespace dff
