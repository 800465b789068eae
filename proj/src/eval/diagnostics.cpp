// Copyright 2026 The v2s Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "v2s/eval/diagnostics.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <vector>

#include "v2s/core/error.hpp"

namespace v2s::eval {

namespace {

struct FileCloser {
  void operator()(FILE* f) const { std::fclose(f); }
};
using File = std::unique_ptr<FILE, FileCloser>;

std::uint8_t to_byte(double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0))); }

}  // namespace

Eigen::MatrixXd spectrogram_difference(const Waveform& x, const Waveform& y, const dsp::MfccParams& params) {
  if (x.size() != y.size()) {
    throw ShapeError("spectrogram_difference: inputs have " + std::to_string(x.size()) + " and " +
                     std::to_string(y.size()) + " samples");
  }
  return (dsp::mel_spectrogram(x.samples(), params) - dsp::mel_spectrogram(y.samples(), params)).cwiseAbs();
}

GrayImage difference_image(const Eigen::Ref<const Eigen::MatrixXd>& diff) {
  const double top = diff.size() ? diff.maxCoeff() : 0.0;
  GrayImage img(diff.rows(), diff.cols());
  for (Eigen::Index r = 0; r < diff.rows(); ++r)
    for (Eigen::Index c = 0; c < diff.cols(); ++c)
      img(diff.rows() - 1 - r, c) = top > 0.0 ? to_byte(255.0 * (1.0 - diff(r, c) / top)) : 255;
  return img;
}

GrayImage intensity_image(const Eigen::Ref<const Eigen::MatrixXd>& values) {
  const double lo = values.size() ? values.minCoeff() : 0.0;
  const double hi = values.size() ? values.maxCoeff() : 0.0;
  GrayImage img(values.rows(), values.cols());
  for (Eigen::Index r = 0; r < values.rows(); ++r)
    for (Eigen::Index c = 0; c < values.cols(); ++c)
      img(values.rows() - 1 - r, c) = hi > lo ? to_byte(255.0 * (values(r, c) - lo) / (hi - lo)) : 0;
  return img;
}

GrayImage waveform_image(const Eigen::Ref<const Eigen::VectorXd>& samples, int width, int height) {
  GrayImage img = GrayImage::Constant(height, width, 255);
  const int mid = height / 2;
  auto row_of = [&](double v) {
    return std::clamp(static_cast<int>(std::lround(mid - std::clamp(v, -1.0, 1.0) * (height / 2 - 1))), 0, height - 1);
  };
  img.row(mid).setConstant(192);
  const Eigen::Index n = samples.size();
  for (int c = 0; c < width && n > 0; ++c) {
    const Eigen::Index a = n * c / width;
    const Eigen::Index b = std::max(a + 1, n * (c + 1) / width);
    const auto seg = samples.segment(a, std::min(b, n) - a);
    const int r0 = row_of(seg.maxCoeff()), r1 = row_of(seg.minCoeff());
    for (int r = r0; r <= r1; ++r) img(r, c) = 0;
  }
  return img;
}

void write_png(const GrayImage& image, const std::string& path) {
  File f(std::fopen(path.c_str(), "wb"));
  if (!f) throw IoError("cannot write " + path);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw IoError("cannot initialize PNG writer for " + path);
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("PNG encoding failed for " + path);
  }
  png_init_io(png, f.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.cols()), static_cast<png_uint_32>(image.rows()), 8,
               PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (Eigen::Index r = 0; r < image.rows(); ++r) {
    png_write_row(png, const_cast<png_bytep>(image.row(r).data()));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

GrayImage read_png(const std::string& path) {
  File f(std::fopen(path.c_str(), "rb"));
  if (!f) throw IoError("cannot open " + path);
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("cannot initialize PNG reader for " + path);
  }
  GrayImage img;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError(path + ": not a readable PNG");
  }
  png_init_io(png, f.get());
  png_read_info(png, info);
  if (png_get_color_type(png, info) != PNG_COLOR_TYPE_GRAY || png_get_bit_depth(png, info) != 8) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError(path + ": expected an 8-bit grayscale PNG");
  }
  img.resize(png_get_image_height(png, info), png_get_image_width(png, info));
  for (Eigen::Index r = 0; r < img.rows(); ++r) png_read_row(png, img.row(r).data(), nullptr);
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

}  // namespace v2s::eval
