// Copyright 2026 The Multilight Authors
// SPDX-License-Identifier: Apache-2.0

#include "multilight/envmap.hpp"

#include <cmath>

#include "multilight/brdf.hpp"
#include "multilight/errors.hpp"
#include "multilight/parallel.hpp"
#include "multilight/rng.hpp"

namespace multilight {

void EnvironmentMap::validate() const {
  if (radiance.channels() != 3)
    throw DataError("environment map: must have 3 channels");
  if (radiance.width() != 2 * radiance.height())
    throw DataError("environment map: width must be 2x height");
  for (size_t i = 0; i < radiance.size(); ++i)
    if (radiance.data()[i] < 0.0f)
      throw DataError("environment map: negative radiance");
}

Vec3 EnvironmentMap::sample(const Vec3& dir) const {
  const int w = radiance.width(), h = radiance.height();
  const double u = 0.5 + std::atan2(dir.x, -dir.z) / kTwoPi;
  const double v = std::acos(clamp(dir.y, -1.0, 1.0)) / kPi;
  // Pixel-center bilinear; u wraps around the seam, v clamps at the poles.
  double fx = u * w - 0.5;
  double fy = v * h - 0.5;
  const double fx0 = std::floor(fx), fy0 = std::floor(fy);
  const double tx = fx - fx0, ty = fy - fy0;
  auto wrap_x = [w](int x) { return ((x % w) + w) % w; };
  auto clamp_y = [h](int y) { return y < 0 ? 0 : (y >= h ? h - 1 : y); };
  const int x0 = wrap_x(int(fx0)), x1 = wrap_x(int(fx0) + 1);
  const int y0 = clamp_y(int(fy0)), y1 = clamp_y(int(fy0) + 1);
  const Vec3 c00 = radiance.rgb(x0, y0), c10 = radiance.rgb(x1, y0);
  const Vec3 c01 = radiance.rgb(x0, y1), c11 = radiance.rgb(x1, y1);
  return (c00 * (1.0 - tx) + c10 * tx) * (1.0 - ty) +
         (c01 * (1.0 - tx) + c11 * tx) * ty;
}

EnvironmentMap EnvironmentMap::uniform(int height, const Vec3& value) {
  EnvironmentMap env;
  env.radiance = ImagePlane(2 * height, height, 3);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < 2 * height; ++x) env.radiance.set_rgb(x, y, value);
  return env;
}

EnvironmentMap EnvironmentMap::sky_gradient(int height, const Vec3& horizon,
                                            const Vec3& zenith) {
  EnvironmentMap env;
  env.radiance = ImagePlane(2 * height, height, 3);
  for (int y = 0; y < height; ++y) {
    // v = 0 is the +y pole.
    const double elevation = std::cos((y + 0.5) / height * kPi);
    const double t = clamp(elevation, 0.0, 1.0);
    const Vec3 c = horizon + (zenith - horizon) * t;
    for (int x = 0; x < 2 * height; ++x) env.radiance.set_rgb(x, y, c);
  }
  return env;
}

namespace {

struct LobeSample {
  Vec3 dir;
  double pdf_cos = 0.0;
  double pdf_ndf = 0.0;
};

/// pdf of the NDF strategy for direction l given view v and frame n.
double ndf_pdf(const Vec3& n, const Vec3& v, const Vec3& l, double alpha) {
  const Vec3 hv = v + l;
  const double hlen = length(hv);
  if (hlen < 1e-9) return 0.0;
  const Vec3 h = hv / hlen;
  const double n_dot_h = dot(n, h);
  const double v_dot_h = dot(v, h);
  if (n_dot_h <= 0.0 || v_dot_h <= 1e-9) return 0.0;
  return ggx_ndf(n_dot_h, alpha) * n_dot_h / (4.0 * v_dot_h);
}

}  // namespace

RelightSplit relight_env_split(const GBuffer& gb, const Camera& camera,
                               const EnvironmentMap& env, int spp,
                               uint64_t seed, int threads) {
  if (spp < 1) throw NumericalError("relight_env: samples_per_pixel must be >= 1");
  env.validate();
  RelightSplit out;
  out.diffuse = ImagePlane(gb.width(), gb.height(), 3);
  out.specular = ImagePlane(gb.width(), gb.height(), 3);

  parallel_for(gb.height(), threads, [&](int64_t y) {
    for (int x = 0; x < gb.width(); ++x) {
      if (!gb.foreground(x, int(y))) continue;
      const uint64_t pixel = uint64_t(y) * uint64_t(gb.width()) + uint64_t(x);

      const Vec3 n = gb.normal.rgb(x, int(y));
      // View direction in camera space (the environment's frame).
      const Vec3 v = camera.to_camera(-camera.ray_direction(x, int(y)));
      MaterialSample mat;
      mat.albedo = gb.albedo.rgb(x, int(y));
      mat.roughness = gb.roughness.at(x, int(y));
      mat.metallic = gb.metallic.at(x, int(y));
      const double alpha = mat.alpha();

      Vec3 t, b;
      orthonormal_basis(n, t, b);

      Vec3 acc_d(0.0), acc_s(0.0);
      for (int s = 0; s < spp; ++s) {
        const uint64_t dim = uint64_t(s) * 4;
        // Strategy 1: cosine-weighted around n.
        {
          const double u1 = rng_uniform(seed, kStreamRelight, pixel, dim);
          const double u2 = rng_uniform(seed, kStreamRelight, pixel, dim + 1);
          const double cz = std::sqrt(1.0 - u1);
          const double sz = std::sqrt(u1);
          const double phi = kTwoPi * u2;
          const Vec3 l = t * (sz * std::cos(phi)) + b * (sz * std::sin(phi)) + n * cz;
          const double pdf_cos = cz / kPi;
          const double pdf_sum = pdf_cos + ndf_pdf(n, v, l, alpha);
          if (pdf_sum > 1e-12 && cz > 0.0) {
            const BrdfValue f = eval_brdf(n, v, l, mat);
            const Vec3 li = env.sample(l);
            const double w = cz / pdf_sum;
            acc_d += f.diffuse * li * w;
            acc_s += f.specular * li * w;
          }
        }
        // Strategy 2: GGX NDF half-vector sampling.
        {
          const double u3 = rng_uniform(seed, kStreamRelight, pixel, dim + 2);
          const double u4 = rng_uniform(seed, kStreamRelight, pixel, dim + 3);
          const double a2 = alpha * alpha;
          const double ch = std::sqrt(clamp((1.0 - u3) / (1.0 + (a2 - 1.0) * u3), 0.0, 1.0));
          const double sh = std::sqrt(1.0 - ch * ch);
          const double phi = kTwoPi * u4;
          const Vec3 h = t * (sh * std::cos(phi)) + b * (sh * std::sin(phi)) + n * ch;
          const Vec3 l = reflect(v, h);
          const double n_dot_l = dot(n, l);
          if (n_dot_l > 0.0) {
            const double pdf_ndf_v = ndf_pdf(n, v, l, alpha);
            const double pdf_sum = n_dot_l / kPi + pdf_ndf_v;
            if (pdf_ndf_v > 1e-12 && pdf_sum > 1e-12) {
              const BrdfValue f = eval_brdf(n, v, l, mat);
              const Vec3 li = env.sample(l);
              const double w = n_dot_l / pdf_sum;
              acc_d += f.diffuse * li * w;
              acc_s += f.specular * li * w;
            }
          }
        }
      }
      out.diffuse.set_rgb(x, int(y), acc_d / double(spp));
      out.specular.set_rgb(x, int(y), acc_s / double(spp));
    }
  });
  return out;
}

ImagePlane relight_env(const GBuffer& gb, const Camera& camera,
                       const EnvironmentMap& env, int spp, uint64_t seed,
                       int threads) {
  const RelightSplit split = relight_env_split(gb, camera, env, spp, seed, threads);
  ImagePlane out(gb.width(), gb.height(), 3);
  for (size_t i = 0; i < out.size(); ++i)
    out.data()[i] = split.diffuse.data()[i] + split.specular.data()[i];
  return out;
}

}  // namespace multilight
