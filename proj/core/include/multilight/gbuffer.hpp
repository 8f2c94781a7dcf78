// Copyright 2026 The Multilight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "multilight/image.hpp"
#include "multilight/light_rig.hpp"
#include "multilight/vec3.hpp"

namespace multilight {

/// Per-pixel geometry and material maps (8 channels total):
/// 3-channel camera-space unit normals, 3-channel albedo, 1-channel
/// roughness, metallic and a binary foreground alpha. The hit-depth
/// plane (Euclidean distance from the camera along the primary ray)
/// rides along so file-based solvers can reconstruct light geometry.
struct GBuffer {
  ImagePlane normal;     // 3 ch, unit vectors, front-facing (z >= 0)
  ImagePlane albedo;     // 3 ch, [0,1]
  ImagePlane roughness;  // 1 ch, [0,1]
  ImagePlane metallic;   // 1 ch, [0,1]
  ImagePlane alpha;      // 1 ch, {0,1}
  ImagePlane depth;      // 1 ch, hit distance; 0 on background

  GBuffer() = default;
  GBuffer(int width, int height);

  int width() const { return normal.width(); }
  int height() const { return normal.height(); }
  bool foreground(int x, int y) const { return alpha.at(x, y) > 0.5f; }

  /// Enforces the type invariants; throws DataError on violation.
  /// Tolerance on |n| is 1e-5; front-facing means n.z >= -1e-6.
  void validate() const;
};

/// L single-light images paired with their poses, plus the environment-lit
/// input image and the shared foreground mask.
struct MultiLightSet {
  std::vector<ImagePlane> images;  // 3-channel, linear
  std::vector<LightPose> poses;
  ImagePlane input;  // 3-channel
  ImagePlane alpha;  // 1-channel mask

  size_t light_count() const { return images.size(); }
  void validate() const;
};

/// Maps a unit normal to storage RGB: rgb = (n + 1) / 2.
Vec3 encode_normal(const Vec3& n);

/// Inverse map with renormalization. Throws NumericalError on a
/// zero-length input.
Vec3 decode_normal(const Vec3& rgb);

}  // namespace multilight
