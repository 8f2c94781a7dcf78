// Copyright 2026 The Multilight Authors
// SPDX-License-Identifier: Apache-2.0

#include "multilight/light_rig.hpp"

#include <cmath>
#include <stdexcept>

#include "multilight/errors.hpp"

namespace multilight {

void LightRig::validate() const {
  if (poses.empty()) throw NumericalError("light rig: no poses");
  if (!(radius > 0.0)) throw NumericalError("light rig: non-positive radius");
  for (const auto& p : poses) {
    if (!(p.theta >= 0.0 && p.theta < kTwoPi))
      throw NumericalError("light rig: theta out of [0, 2pi)");
    if (!(p.phi >= 0.0 && p.phi <= kPi / 2.0 + 1e-12))
      throw NumericalError("light rig: phi out of [0, pi/2]");
  }
}

LightRig light_rig_default() {
  static constexpr int kPhiUnits[9] = {1, 2, 1, 2, 1, 2, 1, 2, 0};
  LightRig rig;
  rig.poses.reserve(9);
  for (int i = 0; i < 9; ++i) {
    double theta = std::fmod(i * (kPi / 4.0), kTwoPi);
    rig.poses.push_back({theta, kPhiUnits[i] * (kPi / 6.0)});
  }
  return rig;
}

Vec3 light_position(const LightPose& pose, double radius, const Camera& camera) {
  const Vec3 c = normalize(camera.position);
  const Vec3 uc = cross(normalize(camera.up), c);
  if (length(uc) < 1e-9) throw NumericalError("degenerate camera basis");
  const Vec3 u = normalize(uc);
  const Vec3 v = cross(c, u);
  const double ct = std::cos(pose.theta), st = std::sin(pose.theta);
  const double cp = std::cos(pose.phi), sp = std::sin(pose.phi);
  return radius * (cp * c + sp * (ct * u + st * v));
}

Vec3 light_position(const LightRig& rig, size_t index, const Camera& camera) {
  if (index >= rig.poses.size())
    throw std::out_of_range("light_position: index past rig size");
  return light_position(rig.poses[index], rig.radius, camera);
}

}  // namespace multilight
