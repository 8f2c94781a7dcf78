// Copyright 2026 The Multilight Authors
// SPDX-License-Identifier: Apache-2.0

#include "multilight/image.hpp"

#include <cmath>

#include "multilight/errors.hpp"

namespace multilight {

ImagePlane::ImagePlane(int width, int height, int channels, float fill)
    : width_(width), height_(height), channels_(channels) {
  if (width <= 0 || height <= 0)
    throw DataError("ImagePlane: dimensions must be positive");
  if (channels != 1 && channels != 3)
    throw DataError("ImagePlane: channel count must be 1 or 3");
  data_.assign(size_t(width) * height * channels, fill);
}

void ImagePlane::validate() const {
  if (channels_ != 1 && channels_ != 3)
    throw DataError("ImagePlane: channel count must be 1 or 3");
  if (data_.size() != size_t(width_) * height_ * channels_)
    throw DataError("ImagePlane: data length does not match dimensions");
  for (const float v : data_)
    if (!std::isfinite(v)) throw DataError("ImagePlane: non-finite value");
}

void ImagePlane::clamp01() {
  for (float& v : data_) v = v < 0.0f ? 0.0f : (v > 1.0f ? 1.0f : v);
}

}  // namespace multilight
