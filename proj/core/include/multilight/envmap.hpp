// Copyright 2026 The Multilight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "multilight/camera.hpp"
#include "multilight/gbuffer.hpp"
#include "multilight/image.hpp"

namespace multilight {

/// Equirectangular radiance map. Directions use the map's own frame
/// (for relighting that frame is camera space):
///   u = 0.5 + atan2(x, -z) / 2pi,  v = acos(clamp(y, -1, 1)) / pi.
struct EnvironmentMap {
  ImagePlane radiance;  // 3 channels, width = 2 * height, values >= 0

  /// Throws DataError on shape or range violations.
  void validate() const;

  /// Bilinear lookup; u wraps, v clamps.
  Vec3 sample(const Vec3& direction) const;

  /// Uniform map of the given brightness (handy for analytic checks).
  static EnvironmentMap uniform(int height, const Vec3& value);

  /// Vertical sky gradient from horizon to zenith color.
  static EnvironmentMap sky_gradient(int height, const Vec3& horizon,
                                     const Vec3& zenith);
};

/// Per-pixel relit result split by lobe; total = diffuse + specular.
struct RelightSplit {
  ImagePlane diffuse;
  ImagePlane specular;
};

/// Monte-Carlo estimate of the environment integral over the normal
/// hemisphere: cosine-weighted sampling for the diffuse lobe and
/// GGX-NDF-proportional sampling for the specular lobe, combined with
/// balance-heuristic multiple importance weights. No self-occlusion.
/// Deterministic in (seed, pixel, sample index) via counter-based hashing,
/// so results are identical for any worker count.
/// Throws NumericalError when samples_per_pixel == 0.
RelightSplit relight_env_split(const GBuffer& gb, const Camera& camera,
                               const EnvironmentMap& env, int samples_per_pixel,
                               uint64_t seed, int threads = 0);

/// Sum of both lobes.
ImagePlane relight_env(const GBuffer& gb, const Camera& camera,
                       const EnvironmentMap& env, int samples_per_pixel,
                       uint64_t seed, int threads = 0);

}  // namespace multilight
