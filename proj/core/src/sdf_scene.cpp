// Copyright 2026 The Multilight Authors
// SPDX-License-Identifier: Apache-2.0

#include "multilight/sdf_scene.hpp"

#include <algorithm>
#include <cmath>

#include "multilight/errors.hpp"
#include "multilight/rng.hpp"

namespace multilight {

namespace {

inline double lerp(double a, double b, double t) { return a + (b - a) * t; }

/// Deterministic value noise on the integer lattice, output in [0, 1].
double value_noise(const Vec3& p, uint64_t seed) {
  const double fx = std::floor(p.x), fy = std::floor(p.y), fz = std::floor(p.z);
  const int64_t ix = int64_t(fx), iy = int64_t(fy), iz = int64_t(fz);
  const double tx = p.x - fx, ty = p.y - fy, tz = p.z - fz;
  auto lattice = [seed](int64_t x, int64_t y, int64_t z) {
    const uint64_t h = hash_key(seed, uint64_t(x) * 0x9e3779b1u ^ uint64_t(y),
                                uint64_t(z));
    return double(h >> 11) * 0x1.0p-53;
  };
  auto sm = [](double t) { return t * t * (3.0 - 2.0 * t); };
  const double sx = sm(tx), sy = sm(ty), sz = sm(tz);
  double c[2][2][2];
  for (int dz = 0; dz < 2; ++dz)
    for (int dy = 0; dy < 2; ++dy)
      for (int dx = 0; dx < 2; ++dx)
        c[dz][dy][dx] = lattice(ix + dx, iy + dy, iz + dz);
  const double x00 = lerp(c[0][0][0], c[0][0][1], sx);
  const double x10 = lerp(c[0][1][0], c[0][1][1], sx);
  const double x01 = lerp(c[1][0][0], c[1][0][1], sx);
  const double x11 = lerp(c[1][1][0], c[1][1][1], sx);
  const double y0 = lerp(x00, x10, sy);
  const double y1 = lerp(x01, x11, sy);
  return lerp(y0, y1, sz);
}

}  // namespace

Vec3 FieldSpec::eval(const Vec3& p) const {
  switch (kind) {
    case Kind::Constant:
      return value_a;
    case Kind::Checker: {
      const int64_t parity = int64_t(std::floor(p.x * scale)) +
                             int64_t(std::floor(p.y * scale)) +
                             int64_t(std::floor(p.z * scale));
      return ((parity % 2 + 2) % 2 == 0) ? value_a : value_b;
    }
    case Kind::ValueNoise: {
      const double t = value_noise(p * scale, noise_seed);
      return value_a + (value_b - value_a) * t;
    }
  }
  return value_a;
}

Vec3 Primitive::to_local(const Vec3& p) const {
  const Vec3 q = p - center;
  return {dot(rot_x, q), dot(rot_y, q), dot(rot_z, q)};
}

double Primitive::sdf(const Vec3& world_point) const {
  const Vec3 p = to_local(world_point);
  switch (kind) {
    case Kind::Sphere:
      return length(p) - radius;
    case Kind::RoundedBox: {
      const Vec3 q{std::abs(p.x) - half_extents.x, std::abs(p.y) - half_extents.y,
                   std::abs(p.z) - half_extents.z};
      const Vec3 qp{std::max(q.x, 0.0), std::max(q.y, 0.0), std::max(q.z, 0.0)};
      const double outside = length(qp);
      const double inside = std::min(std::max(q.x, std::max(q.y, q.z)), 0.0);
      return outside + inside - rounding;
    }
    case Kind::Torus: {
      const double ring = std::sqrt(p.x * p.x + p.z * p.z) - major_radius;
      return std::sqrt(ring * ring + p.y * p.y) - minor_radius;
    }
    case Kind::Capsule: {
      const double y = clamp(p.y, -half_length, half_length);
      const Vec3 d{p.x, p.y - y, p.z};
      return length(d) - radius;
    }
    case Kind::DisplacedSphere: {
      const double base = length(p) - radius;
      const double disp = disp_amplitude * std::sin(disp_frequency * p.x) *
                          std::sin(disp_frequency * p.y) *
                          std::sin(disp_frequency * p.z);
      return base + disp;
    }
  }
  return 1e30;
}

double Primitive::bounding_radius() const {
  double local = 0.0;
  switch (kind) {
    case Kind::Sphere:
      local = radius;
      break;
    case Kind::RoundedBox:
      local = length(half_extents) + rounding;
      break;
    case Kind::Torus:
      local = major_radius + minor_radius;
      break;
    case Kind::Capsule:
      local = half_length + radius;
      break;
    case Kind::DisplacedSphere:
      local = radius + disp_amplitude;
      break;
  }
  return length(center) + local;
}

double Primitive::lipschitz_excess() const {
  if (kind != Kind::DisplacedSphere) return 0.0;
  // |grad disp| <= amplitude * frequency * sqrt(3)
  return disp_amplitude * disp_frequency * 1.7320508075688772;
}

double Scene::sdf(const Vec3& p, int* nearest) const {
  double best = 1e30;
  int best_i = -1;
  for (size_t i = 0; i < primitives.size(); ++i) {
    const double d = primitives[i].sdf(p);
    if (d < best) {
      best = d;
      best_i = int(i);
    }
  }
  if (nearest) *nearest = best_i;
  return best;
}

Vec3 Scene::sdf_gradient(const Vec3& p) const {
  constexpr double h = 1e-4;
  const double dx = sdf({p.x + h, p.y, p.z}) - sdf({p.x - h, p.y, p.z});
  const double dy = sdf({p.x, p.y + h, p.z}) - sdf({p.x, p.y - h, p.z});
  const double dz = sdf({p.x, p.y, p.z + h}) - sdf({p.x, p.y, p.z - h});
  return {dx, dy, dz};
}

MaterialSample Scene::material_at(const Vec3& world_point, int prim_index) const {
  const Primitive& prim = primitives[size_t(prim_index)];
  const Vec3 local = prim.to_local(world_point);
  MaterialSample mat;
  mat.albedo = clamp01(prim.albedo_field.eval(local));
  mat.roughness = clamp(prim.roughness_field.eval(local).x, 0.0, 1.0);
  mat.metallic = clamp(prim.metallic_field.eval(local).x, 0.0, 1.0);
  return mat;
}

double Scene::step_scale() const {
  double excess = 0.0;
  for (const auto& prim : primitives)
    excess = std::max(excess, prim.lipschitz_excess());
  return 1.0 / (1.0 + excess);
}

double Scene::bounding_radius() const {
  double r = 0.0;
  for (const auto& prim : primitives) r = std::max(r, prim.bounding_radius());
  return r;
}

void Scene::validate() const {
  if (primitives.empty()) throw DataError("scene: no primitives");
  if (bounding_radius() > 1.5 + 1e-9)
    throw DataError("scene: exceeds radius-1.5 bounding sphere");
}

void set_rotation(Primitive& prim, const Vec3& axis, double angle) {
  const Vec3 a = normalize(axis);
  const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
  // Rodrigues rotation; rows form the world->local (inverse) rotation.
  prim.rot_x = {t * a.x * a.x + c, t * a.x * a.y + s * a.z, t * a.x * a.z - s * a.y};
  prim.rot_y = {t * a.x * a.y - s * a.z, t * a.y * a.y + c, t * a.y * a.z + s * a.x};
  prim.rot_z = {t * a.x * a.z + s * a.y, t * a.y * a.z - s * a.x, t * a.z * a.z + c};
}

}  // namespace multilight
