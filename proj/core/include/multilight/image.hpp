// Copyright 2026 The Multilight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "multilight/vec3.hpp"

namespace multilight {

/// Linear-radiometric raster, row-major, top row first.
/// 1 channel (scalar maps) or 3 channels (RGB). Values must stay finite;
/// validate() enforces that after bulk edits.
class ImagePlane {
 public:
  ImagePlane() = default;
  ImagePlane(int width, int height, int channels, float fill = 0.0f);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  int64_t pixel_count() const { return int64_t(width_) * height_; }
  bool empty() const { return data_.empty(); }

  float* data() { return data_.data(); }
  const float* data() const { return data_.data(); }
  size_t size() const { return data_.size(); }

  float& at(int x, int y, int c = 0) {
    return data_[(size_t(y) * width_ + x) * channels_ + c];
  }
  float at(int x, int y, int c = 0) const {
    return data_[(size_t(y) * width_ + x) * channels_ + c];
  }

  Vec3 rgb(int x, int y) const {
    const size_t i = (size_t(y) * width_ + x) * channels_;
    if (channels_ == 1) return Vec3(data_[i]);
    return {data_[i], data_[i + 1], data_[i + 2]};
  }
  void set_rgb(int x, int y, const Vec3& v) {
    const size_t i = (size_t(y) * width_ + x) * channels_;
    if (channels_ == 1) {
      data_[i] = float(v.x);
    } else {
      data_[i] = float(v.x);
      data_[i + 1] = float(v.y);
      data_[i + 2] = float(v.z);
    }
  }

  bool same_shape(const ImagePlane& o) const {
    return width_ == o.width_ && height_ == o.height_ && channels_ == o.channels_;
  }

  /// Throws DataError if any value is non-finite or the shape is invalid.
  void validate() const;

  /// Componentwise clamp to [0, 1].
  void clamp01();

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<float> data_;
};

}  // namespace multilight
