// Copyright 2026 The Multilight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "multilight/vec3.hpp"

namespace multilight {

// Metallic-roughness microfacet model shared by the forward renderer and
// the solver residual: GGX normal distribution, separable Schlick-GGX
// geometry with k = alpha/2, Schlick Fresnel with dielectric base 0.04,
// and the lobe parameter alpha = roughness^2 floored at 1e-3.

constexpr double kAlphaMin = 1e-3;
constexpr double kDielectricF0 = 0.04;

struct MaterialSample {
  Vec3 albedo{0.5, 0.5, 0.5};  // [0,1] per channel
  double roughness = 0.5;      // [0,1]
  double metallic = 0.0;       // [0,1]

  /// Squared-roughness lobe parameter with the singularity floor.
  double alpha() const {
    const double a = roughness * roughness;
    return a < kAlphaMin ? kAlphaMin : a;
  }
};

/// Schlick approximation: f0 + (1 - f0) (1 - cos)^5.
Vec3 fresnel_schlick(double cos_theta, const Vec3& f0);

/// GGX/Trowbridge-Reitz NDF: alpha^2 / (pi ((n.h)^2 (alpha^2 - 1) + 1)^2).
double ggx_ndf(double n_dot_h, double alpha);

/// Separable Schlick-GGX masking-shadowing, k = alpha/2:
/// G1(x) = x / (x (1-k) + k), G = G1(n.v) G1(n.l).
double smith_g(double n_dot_v, double n_dot_l, double alpha);

/// Cook-Torrance evaluation. Both terms are BRDF values (per steradian),
/// not yet weighted by n.l or irradiance:
///   diffuse  = (1 - metallic) albedo / pi
///   specular = D G F / (4 (n.v)(n.l)),  h = normalize(v + l)
/// The denominator is floored at 1e-6; a degenerate v + l = 0 yields
/// zero specular.
struct BrdfValue {
  Vec3 diffuse;
  Vec3 specular;
};
BrdfValue eval_brdf(const Vec3& n, const Vec3& v, const Vec3& l,
                    const MaterialSample& mat);

/// Outgoing radiance at a surface point lit by one point light:
///   (diffuse + specular) (n.l) intensity / r^2
/// with l toward the light and r the distance. Returns zero when the
/// light is occluded or below the horizon (n.l <= 0).
Vec3 shade_point(const Vec3& n, const Vec3& view_dir, const Vec3& point,
                 const MaterialSample& mat, const Vec3& light_pos,
                 const Vec3& light_intensity, bool visible);

/// Variant taking precomputed light direction and distance; this is the
/// exact forward model the per-pixel solver differentiates.
Vec3 shade_point_dir(const Vec3& n, const Vec3& view_dir,
                     const MaterialSample& mat, const Vec3& light_dir,
                     double light_dist, const Vec3& light_intensity);

}  // namespace multilight
