// Copyright 2026 The Multilight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "multilight/camera.hpp"
#include "multilight/vec3.hpp"

namespace multilight {

/// Spherical light pose: theta is the azimuth about the camera->object
/// axis, phi the angular offset from that axis (phi = 0 puts the light
/// at the camera position).
struct LightPose {
  double theta = 0.0;  // [0, 2pi)
  double phi = 0.0;    // [0, pi/2]
};

/// Point lights arranged on the camera sphere.
struct LightRig {
  std::vector<LightPose> poses;
  double radius = 4.0;                 // world units, shared with the camera
  Vec3 intensity{20.0, 20.0, 20.0};    // RGB radiant intensity per light

  size_t size() const { return poses.size(); }

  /// Throws NumericalError if a pose is out of range or the rig is empty.
  void validate() const;
};

/// Nine-light default: eight lights alternating between two off-axis
/// rings plus one light at the camera position.
///   theta_i = i * pi/4 (mod 2pi),  phi_i = {1,2,1,2,1,2,1,2,0} * pi/6.
LightRig light_rig_default();

/// World position of light `index`. With c the unit vector toward the
/// camera, u = normalize(up x c), v = c x u:
///   p = radius * (cos(phi) c + sin(phi) (cos(theta) u + sin(theta) v)).
/// Throws NumericalError("degenerate camera basis") if up is parallel to c.
Vec3 light_position(const LightRig& rig, size_t index, const Camera& camera);

/// Same formula for a free pose (used on perturbed or subset poses).
Vec3 light_position(const LightPose& pose, double radius, const Camera& camera);

}  // namespace multilight
