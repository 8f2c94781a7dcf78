// Copyright 2026 The Multilight Authors
// SPDX-License-Identifier: Apache-2.0

#include "multilight/brdf.hpp"

#include <cmath>

namespace multilight {

namespace {
inline double clamp01d(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }
}  // namespace

Vec3 fresnel_schlick(double cos_theta, const Vec3& f0) {
  const double c = clamp01d(cos_theta);
  const double w = std::pow(1.0 - c, 5.0);
  return f0 + (Vec3(1.0) - f0) * w;
}

double ggx_ndf(double n_dot_h, double alpha) {
  const double c = clamp01d(n_dot_h);
  const double a2 = alpha * alpha;
  const double d = c * c * (a2 - 1.0) + 1.0;
  return a2 / (kPi * d * d);
}

double smith_g(double n_dot_v, double n_dot_l, double alpha) {
  const double k = alpha * 0.5;
  auto g1 = [k](double x) { return x / (x * (1.0 - k) + k); };
  return g1(clamp01d(n_dot_v)) * g1(clamp01d(n_dot_l));
}

BrdfValue eval_brdf(const Vec3& n, const Vec3& v, const Vec3& l,
                    const MaterialSample& mat) {
  BrdfValue out;
  out.diffuse = mat.albedo * ((1.0 - mat.metallic) / kPi);

  const Vec3 half_unnorm = v + l;
  const double hlen = length(half_unnorm);
  if (hlen < 1e-9) {
    out.specular = Vec3(0.0);
    return out;
  }
  const Vec3 h = half_unnorm / hlen;

  const double n_dot_v = clamp01d(dot(n, v));
  const double n_dot_l = clamp01d(dot(n, l));
  const double n_dot_h = clamp01d(dot(n, h));
  const double v_dot_h = clamp01d(dot(v, h));

  const double alpha = mat.alpha();
  const double d = ggx_ndf(n_dot_h, alpha);
  const double g = smith_g(n_dot_v, n_dot_l, alpha);
  const Vec3 f0 = Vec3(kDielectricF0 * (1.0 - mat.metallic)) + mat.albedo * mat.metallic;
  const Vec3 f = fresnel_schlick(v_dot_h, f0);

  const double denom = 4.0 * n_dot_v * n_dot_l;
  out.specular = f * (d * g / (denom < 1e-6 ? 1e-6 : denom));
  return out;
}

Vec3 shade_point_dir(const Vec3& n, const Vec3& view_dir,
                     const MaterialSample& mat, const Vec3& light_dir,
                     double light_dist, const Vec3& light_intensity) {
  const double n_dot_l = dot(n, light_dir);
  if (n_dot_l <= 0.0) return Vec3(0.0);
  const BrdfValue b = eval_brdf(n, view_dir, light_dir, mat);
  const double falloff = n_dot_l / (light_dist * light_dist);
  return (b.diffuse + b.specular) * light_intensity * falloff;
}

Vec3 shade_point(const Vec3& n, const Vec3& view_dir, const Vec3& point,
                 const MaterialSample& mat, const Vec3& light_pos,
                 const Vec3& light_intensity, bool visible) {
  if (!visible) return Vec3(0.0);
  const Vec3 to_light = light_pos - point;
  const double r = length(to_light);
  return shade_point_dir(n, view_dir, mat, to_light / r, r, light_intensity);
}

}  // namespace multilight
