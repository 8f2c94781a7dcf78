// Copyright 2026 The Multilight Authors
// SPDX-License-Identifier: Apache-2.0

#include "multilight/camera.hpp"

#include <cmath>

#include "multilight/errors.hpp"

namespace multilight {

void Camera::validate() const {
  if (length_squared(look_at - position) == 0.0)
    throw NumericalError("camera: position equals look_at");
  const Vec3 f = normalize(look_at - position);
  if (length(cross(normalize(up), f)) < 1e-9)
    throw NumericalError("camera: up parallel to view direction");
  if (!(vfov > 0.0 && vfov < kPi))
    throw NumericalError("camera: vfov out of (0, pi)");
  if (width <= 0 || height <= 0)
    throw NumericalError("camera: non-positive resolution");
}

Vec3 Camera::forward() const { return normalize(look_at - position); }

Vec3 Camera::right() const { return normalize(cross(forward(), normalize(up))); }

Vec3 Camera::true_up() const { return cross(right(), forward()); }

Vec3 Camera::ray_direction(int x, int y) const {
  const double tan_half = std::tan(0.5 * vfov);
  const double aspect = double(width) / double(height);
  // Pixel centers; +y in image space points down, +y in camera space up.
  const double sx = ((x + 0.5) / width * 2.0 - 1.0) * tan_half * aspect;
  const double sy = (1.0 - (y + 0.5) / height * 2.0) * tan_half;
  return normalize(forward() + right() * sx + true_up() * sy);
}

Vec3 Camera::to_camera(const Vec3& world_dir) const {
  const Vec3 r = right(), u = true_up(), f = forward();
  return {dot(world_dir, r), dot(world_dir, u), -dot(world_dir, f)};
}

Vec3 Camera::to_world(const Vec3& cam_dir) const {
  const Vec3 r = right(), u = true_up(), f = forward();
  return r * cam_dir.x + u * cam_dir.y - f * cam_dir.z;
}

}  // namespace multilight
