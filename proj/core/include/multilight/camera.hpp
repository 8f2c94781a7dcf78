// Copyright 2026 The Multilight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "multilight/vec3.hpp"

namespace multilight {

/// Pinhole camera. Camera space is right-handed with x right, y up and
/// z toward the viewer, so a front-facing normal has z >= 0.
struct Camera {
  Vec3 position{0.0, 0.0, 4.0};
  Vec3 look_at{0.0, 0.0, 0.0};
  Vec3 up{0.0, 1.0, 0.0};
  double vfov = rad_from_deg(40.0);  // radians
  int width = 256;
  int height = 256;

  /// Throws NumericalError on a degenerate configuration.
  void validate() const;

  /// World-space forward/right/up triad (forward points at look_at).
  Vec3 forward() const;
  Vec3 right() const;
  Vec3 true_up() const;

  /// World-space direction of the primary ray through pixel center (x, y).
  Vec3 ray_direction(int x, int y) const;

  /// World direction -> camera space (x right, y up, z toward viewer).
  Vec3 to_camera(const Vec3& world_dir) const;
  /// Camera-space direction -> world.
  Vec3 to_world(const Vec3& cam_dir) const;
};

}  // namespace multilight
