// Copyright 2026 The Multilight Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "multilight/brdf.hpp"
#include "multilight/rng.hpp"

using namespace multilight;

namespace {

Vec3 random_unit(uint64_t stream, uint64_t counter) {
  for (uint64_t d = 0;; d += 8) {
    const Vec3 v{rng_normal(11, stream, counter, d),
                 rng_normal(11, stream, counter, d + 2),
                 rng_normal(11, stream, counter, d + 4)};
    if (length(v) > 1e-3) return normalize(v);
  }
}

Vec3 random_hemisphere(const Vec3& n, uint64_t stream, uint64_t counter) {
  Vec3 v = random_unit(stream, counter);
  if (dot(v, n) < 0.0) v = -v;
  return v;
}

}  // namespace

TEST_CASE("fresnel schlick") {
  CHECK(fresnel_schlick(1.0, Vec3(0.04)).x == doctest::Approx(0.04));
  CHECK(fresnel_schlick(0.0, Vec3(0.04)).x == doctest::Approx(1.0));
  CHECK(fresnel_schlick(0.5, Vec3(0.04)).x == doctest::Approx(0.07));
}

TEST_CASE("ggx ndf") {
  CHECK(ggx_ndf(1.0, 1.0) == doctest::Approx(1.0 / kPi));
  CHECK(ggx_ndf(1.0, 0.5) == doctest::Approx(4.0 / kPi));
  CHECK(ggx_ndf(0.0, 0.5) == doctest::Approx(0.25 / kPi));
}

TEST_CASE("smith masking-shadowing") {
  CHECK(smith_g(1.0, 1.0, 0.7) == doctest::Approx(1.0));
  CHECK(smith_g(0.5, 0.0, 0.5) == doctest::Approx(0.0));
  CHECK(smith_g(0.5, 1.0, 0.5) == doctest::Approx(0.8));
}

TEST_CASE("brdf evaluation") {
  const Vec3 n{0.0, 0.0, 1.0};

  SUBCASE("metallic kills the diffuse lobe") {
    MaterialSample mat;
    mat.albedo = {0.8, 0.2, 0.4};
    mat.metallic = 1.0;
    const BrdfValue b = eval_brdf(n, n, n, mat);
    CHECK(b.diffuse.x == 0.0);
    CHECK(b.diffuse.y == 0.0);
    CHECK(b.diffuse.z == 0.0);
  }

  SUBCASE("normal-incidence dielectric composes the three terms") {
    MaterialSample mat;
    mat.albedo = Vec3(0.6);
    mat.roughness = 1.0;
    mat.metallic = 0.0;
    const BrdfValue b = eval_brdf(n, n, n, mat);
    CHECK(b.diffuse.x == doctest::Approx(0.6 / kPi));
    // D(1,1) G(1,1) F0 / 4 = (1/pi) * 1 * 0.04 / 4
    CHECK(b.specular.x == doctest::Approx(0.01 / kPi));
  }
}

TEST_CASE("point-light shading") {
  const Vec3 n{0.0, 0.0, 1.0};
  MaterialSample mat;
  mat.albedo = Vec3(0.6);
  mat.roughness = 1.0;
  mat.metallic = 0.0;

  SUBCASE("occlusion and attached shadow") {
    const Vec3 black = shade_point(n, n, Vec3(0.0), mat, {0.0, 0.0, 1.0},
                                   Vec3(kPi), false);
    CHECK(black == Vec3(0.0));
    const Vec3 behind = shade_point(n, n, Vec3(0.0), mat, {0.0, 0.0, -1.0},
                                    Vec3(kPi), true);
    CHECK(behind == Vec3(0.0));
  }

  SUBCASE("head-on composite value") {
    // diffuse 0.6 plus pi * specular(0.01/pi) = 0.61.
    const Vec3 c = shade_point(n, n, Vec3(0.0), mat, {0.0, 0.0, 1.0},
                               Vec3(kPi), true);
    CHECK(c.x == doctest::Approx(0.61));
    CHECK(c.y == doctest::Approx(0.61));
  }
}

TEST_CASE("brdf reciprocity and positivity") {
  for (int i = 0; i < 200; ++i) {
    const Vec3 n = random_unit(20, i);
    const Vec3 v = random_hemisphere(n, 21, i);
    const Vec3 l = random_hemisphere(n, 22, i);
    MaterialSample mat;
    mat.albedo = {rng_uniform(11, 23, i, 0), rng_uniform(11, 23, i, 1),
                  rng_uniform(11, 23, i, 2)};
    mat.roughness = rng_uniform(11, 23, i, 3);
    mat.metallic = rng_uniform(11, 23, i, 4);

    const BrdfValue ab = eval_brdf(n, v, l, mat);
    const BrdfValue ba = eval_brdf(n, l, v, mat);
    CHECK(ab.diffuse.x == doctest::Approx(ba.diffuse.x));
    CHECK(ab.specular.x == doctest::Approx(ba.specular.x).epsilon(1e-9));
    CHECK(ab.specular.y == doctest::Approx(ba.specular.y).epsilon(1e-9));

    CHECK(ab.diffuse.x >= 0.0);
    CHECK(ab.specular.x >= 0.0);
    CHECK(ab.specular.y >= 0.0);
    CHECK(ab.specular.z >= 0.0);
  }
}

TEST_CASE("shading is linear in intensity and diffuse albedo") {
  const Vec3 n{0.0, 0.0, 1.0};
  const Vec3 v = normalize(Vec3{0.3, 0.1, 1.0});
  const Vec3 lp{1.0, 2.0, 3.0};

  MaterialSample mat;
  mat.albedo = Vec3(0.5);
  mat.roughness = 0.6;
  mat.metallic = 0.0;

  const Vec3 one = shade_point(n, v, Vec3(0.0), mat, lp, Vec3(2.0), true);
  const Vec3 two = shade_point(n, v, Vec3(0.0), mat, lp, Vec3(4.0), true);
  CHECK(two.x == doctest::Approx(2.0 * one.x));
  CHECK(two.z == doctest::Approx(2.0 * one.z));

  // With the specular term subtracted, output is linear in albedo.
  MaterialSample dark = mat;
  dark.albedo = Vec3(0.25);
  const BrdfValue full = eval_brdf(n, v, normalize(lp), mat);
  const BrdfValue half = eval_brdf(n, v, normalize(lp), dark);
  CHECK(half.diffuse.x == doctest::Approx(0.5 * full.diffuse.x));
}

TEST_CASE("white-furnace diffuse energy") {
  MaterialSample mat;
  mat.albedo = Vec3(1.0);
  mat.roughness = 1.0;
  mat.metallic = 0.0;
  const Vec3 n{0.0, 0.0, 1.0};

  // Midpoint quadrature of diffuse * (n.l) over the hemisphere,
  // 100 x 100 = 1e4 samples.
  const int nt = 100, np = 100;
  double sum = 0.0;
  for (int it = 0; it < nt; ++it) {
    const double theta = (it + 0.5) / nt * (kPi / 2.0);
    for (int ip = 0; ip < np; ++ip) {
      const double phi = (ip + 0.5) / np * kTwoPi;
      const Vec3 l{std::sin(theta) * std::cos(phi),
                   std::sin(theta) * std::sin(phi), std::cos(theta)};
      const BrdfValue b = eval_brdf(n, n, l, mat);
      sum += b.diffuse.x * dot(n, l) * std::sin(theta) * (kPi / 2.0 / nt) *
             (kTwoPi / np);
    }
  }
  CHECK(sum >= 0.95);
  CHECK(sum <= 1.0 + 1e-9);
}
