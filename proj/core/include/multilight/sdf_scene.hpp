// Copyright 2026 The Multilight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "multilight/brdf.hpp"
#include "multilight/vec3.hpp"

namespace multilight {

/// Spatially varying scalar or color field over a primitive's local frame.
/// Constant uses value_a; checker alternates value_a/value_b on a cubic
/// lattice of `scale` cells per unit; value-noise lerps between the two
/// with deterministic trilinear value noise.
struct FieldSpec {
  enum class Kind { Constant, Checker, ValueNoise };
  Kind kind = Kind::Constant;
  Vec3 value_a{0.5, 0.5, 0.5};
  Vec3 value_b{0.5, 0.5, 0.5};
  double scale = 2.0;
  uint64_t noise_seed = 0;

  Vec3 eval(const Vec3& local_point) const;
};

/// One signed-distance primitive with its material fields. Geometry is
/// expressed in a local frame (center + row-major rotation) so patterns
/// stick to the primitive.
struct Primitive {
  enum class Kind { Sphere, RoundedBox, Torus, Capsule, DisplacedSphere };
  Kind kind = Kind::Sphere;

  Vec3 center{0.0, 0.0, 0.0};
  Vec3 rot_x{1.0, 0.0, 0.0};  // rows of the world->local rotation
  Vec3 rot_y{0.0, 1.0, 0.0};
  Vec3 rot_z{0.0, 0.0, 1.0};

  double radius = 1.0;            // sphere / displaced sphere / capsule
  Vec3 half_extents{0.5, 0.5, 0.5};  // rounded box
  double rounding = 0.1;          // rounded box edge radius
  double major_radius = 0.7;      // torus
  double minor_radius = 0.25;     // torus
  double half_length = 0.5;       // capsule (along local y)
  double disp_amplitude = 0.1;    // displaced sphere
  double disp_frequency = 6.0;

  FieldSpec albedo_field;
  FieldSpec roughness_field;
  FieldSpec metallic_field;

  double sdf(const Vec3& world_point) const;
  Vec3 to_local(const Vec3& world_point) const;

  /// Radius of the smallest origin-centered sphere containing the primitive.
  double bounding_radius() const;

  /// Upper bound on the local displacement gradient; 0 for exact SDFs.
  double lipschitz_excess() const;
};

/// Procedural scene: a union of primitives. Fits inside the radius-1.5
/// bounding sphere centered at the origin.
struct Scene {
  std::vector<Primitive> primitives;

  /// Signed distance of the union; optionally reports the closest primitive.
  double sdf(const Vec3& p, int* nearest = nullptr) const;

  /// Central-difference gradient, h = 1e-4 (unnormalized).
  Vec3 sdf_gradient(const Vec3& p) const;

  MaterialSample material_at(const Vec3& world_point, int prim_index) const;

  /// Step damping for sphere tracing; < 1 when displacement breaks the
  /// unit Lipschitz bound.
  double step_scale() const;

  double bounding_radius() const;

  /// Throws DataError if the scene violates the bounding-sphere or
  /// material range invariants.
  void validate() const;
};

/// Axis-angle rotation applied to a primitive (sets the rot_* rows).
void set_rotation(Primitive& prim, const Vec3& axis, double angle);

}  // namespace multilight
