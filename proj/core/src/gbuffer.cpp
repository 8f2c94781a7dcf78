// Copyright 2026 The Multilight Authors
// SPDX-License-Identifier: Apache-2.0

#include "multilight/gbuffer.hpp"

#include <cmath>

#include "multilight/errors.hpp"

namespace multilight {

GBuffer::GBuffer(int width, int height)
    : normal(width, height, 3),
      albedo(width, height, 3),
      roughness(width, height, 1),
      metallic(width, height, 1),
      alpha(width, height, 1),
      depth(width, height, 1) {}

void GBuffer::validate() const {
  const ImagePlane* planes[] = {&albedo, &roughness, &metallic, &alpha, &depth};
  for (const ImagePlane* p : planes) {
    if (p->width() != normal.width() || p->height() != normal.height())
      throw DataError("gbuffer: plane dimensions disagree");
  }
  normal.validate();
  for (int y = 0; y < height(); ++y) {
    for (int x = 0; x < width(); ++x) {
      const float a = alpha.at(x, y);
      if (a != 0.0f && a != 1.0f) throw DataError("gbuffer: alpha not binary");
      if (a == 1.0f) {
        const Vec3 n = normal.rgb(x, y);
        if (std::abs(length(n) - 1.0) > 1e-5)
          throw DataError("gbuffer: non-unit normal on foreground pixel");
        if (n.z < -1e-6)
          throw DataError("gbuffer: back-facing normal on foreground pixel");
      }
      for (int c = 0; c < 3; ++c) {
        const float v = albedo.at(x, y, c);
        if (v < 0.0f || v > 1.0f) throw DataError("gbuffer: albedo out of [0,1]");
      }
      const float r = roughness.at(x, y), m = metallic.at(x, y);
      if (r < 0.0f || r > 1.0f) throw DataError("gbuffer: roughness out of [0,1]");
      if (m < 0.0f || m > 1.0f) throw DataError("gbuffer: metallic out of [0,1]");
    }
  }
}

void MultiLightSet::validate() const {
  if (images.size() != poses.size())
    throw DataError("multi-light set: image/pose count mismatch");
  for (const auto& img : images) {
    if (img.width() != input.width() || img.height() != input.height())
      throw DataError("multi-light set: image dimensions disagree with input");
    if (img.channels() != 3)
      throw DataError("multi-light set: light image must have 3 channels");
  }
  if (!alpha.empty() &&
      (alpha.width() != input.width() || alpha.height() != input.height()))
    throw DataError("multi-light set: alpha dimensions disagree");
}

Vec3 encode_normal(const Vec3& n) {
  return {(n.x + 1.0) * 0.5, (n.y + 1.0) * 0.5, (n.z + 1.0) * 0.5};
}

Vec3 decode_normal(const Vec3& rgb) {
  const Vec3 n{rgb.x * 2.0 - 1.0, rgb.y * 2.0 - 1.0, rgb.z * 2.0 - 1.0};
  const double len = length(n);
  if (len < 1e-12) throw NumericalError("decode_normal: zero-length vector");
  return n / len;
}

}  // namespace multilight
