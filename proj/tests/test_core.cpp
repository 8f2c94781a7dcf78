// Copyright 2026 The Multilight Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "multilight/camera.hpp"
#include "multilight/errors.hpp"
#include "multilight/gbuffer.hpp"
#include "multilight/image.hpp"
#include "multilight/light_rig.hpp"
#include "multilight/rng.hpp"

using namespace multilight;

TEST_CASE("image plane invariants") {
  ImagePlane img(4, 3, 3, 0.25f);
  CHECK(img.size() == 4 * 3 * 3);
  CHECK(img.at(2, 1, 1) == 0.25f);
  img.validate();

  CHECK_THROWS_AS(ImagePlane(4, 3, 2), DataError);
  CHECK_THROWS_AS(ImagePlane(0, 3, 1), DataError);

  img.at(0, 0, 0) = std::numeric_limits<float>::infinity();
  CHECK_THROWS_AS(img.validate(), DataError);
}

TEST_CASE("default light rig matches the nine-light arrangement") {
  const LightRig rig = light_rig_default();
  REQUIRE(rig.size() == 9);
  rig.validate();

  CHECK(rig.poses[0].theta == doctest::Approx(0.0));
  CHECK(rig.poses[0].phi == doctest::Approx(kPi / 6.0));
  CHECK(rig.poses[3].theta == doctest::Approx(3.0 * kPi / 4.0));
  CHECK(rig.poses[3].phi == doctest::Approx(kPi / 3.0));
  // Light 8 sits at the camera: theta 2pi wraps to 0, phi 0.
  CHECK(rig.poses[8].theta == doctest::Approx(0.0));
  CHECK(rig.poses[8].phi == doctest::Approx(0.0));

  // The eight ring lights alternate between pi/6 and pi/3.
  int at_camera = 0;
  for (int i = 0; i < 8; ++i) {
    const double expected = (i % 2 == 0) ? kPi / 6.0 : kPi / 3.0;
    CHECK(rig.poses[i].phi == doctest::Approx(expected));
  }
  for (const auto& p : rig.poses)
    if (p.phi == 0.0) ++at_camera;
  CHECK(at_camera == 1);
}

TEST_CASE("light positions on the rig sphere") {
  Camera camera;
  camera.position = {0.0, 0.0, 4.0};
  camera.up = {0.0, 1.0, 0.0};
  LightRig rig = light_rig_default();
  rig.radius = 4.0;

  SUBCASE("phi = 0 is the camera position") {
    const Vec3 p = light_position({1.234, 0.0}, 4.0, camera);
    CHECK(p.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p.y == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p.z == doctest::Approx(4.0));
  }

  SUBCASE("theta = 0, phi = pi/2 lands on the u axis") {
    const Vec3 p = light_position({0.0, kPi / 2.0}, 4.0, camera);
    CHECK(p.x == doctest::Approx(4.0));
    CHECK(std::abs(p.y) < 1e-12);
    CHECK(std::abs(p.z) < 1e-12);
  }

  SUBCASE("theta = pi/4, phi = pi/3 by direct evaluation") {
    const Vec3 p = light_position({kPi / 4.0, kPi / 3.0}, 4.0, camera);
    CHECK(length(p) == doctest::Approx(4.0).epsilon(1e-12));
    const Vec3 c = normalize(camera.position);
    CHECK(dot(p, c) / length(p) == doctest::Approx(std::cos(kPi / 3.0)));
    CHECK(p.x == doctest::Approx(4.0 * 0.61237243569579447));
    CHECK(p.y == doctest::Approx(4.0 * 0.61237243569579447));
    CHECK(p.z == doctest::Approx(4.0 * 0.5));
  }

  SUBCASE("radius and off-axis angle hold for random rigs and cameras") {
    for (int trial = 0; trial < 50; ++trial) {
      Camera cam;
      cam.position = {rng_uniform(7, 1, trial, 0, -3.0, 3.0),
                      rng_uniform(7, 1, trial, 1, -2.0, 2.0),
                      rng_uniform(7, 1, trial, 2, 1.0, 5.0)};
      const double radius = rng_uniform(7, 1, trial, 3, 1.0, 8.0);
      const LightPose pose{rng_uniform(7, 1, trial, 4, 0.0, kTwoPi),
                           rng_uniform(7, 1, trial, 5, 0.0, kPi / 2.0)};
      const Vec3 p = light_position(pose, radius, cam);
      CHECK(length(p) == doctest::Approx(radius).epsilon(1e-9));
      const double cosang = dot(normalize(p), normalize(cam.position));
      CHECK(std::acos(clamp(cosang, -1.0, 1.0)) ==
            doctest::Approx(pose.phi).epsilon(1e-9));
    }
  }

  SUBCASE("degenerate basis is an error") {
    Camera cam;
    cam.position = {0.0, 4.0, 0.0};  // parallel to up
    cam.up = {0.0, 1.0, 0.0};
    CHECK_THROWS_WITH_AS(light_position({0.0, 0.3}, 4.0, cam),
                         "degenerate camera basis", NumericalError);
  }
}

TEST_CASE("normal encoding") {
  const Vec3 up{0.0, 0.0, 1.0};
  const Vec3 enc = encode_normal(up);
  CHECK(enc.x == doctest::Approx(0.5));
  CHECK(enc.y == doctest::Approx(0.5));
  CHECK(enc.z == doctest::Approx(1.0));

  const Vec3 neg = encode_normal({-1.0, 0.0, 0.0});
  CHECK(neg.x == doctest::Approx(0.0));
  CHECK(neg.y == doctest::Approx(0.5));
  CHECK(neg.z == doctest::Approx(0.5));

  SUBCASE("continuous round trip under 1e-6") {
    for (int i = 0; i < 200; ++i) {
      Vec3 n{rng_normal(3, 2, i, 0), rng_normal(3, 2, i, 2),
             rng_normal(3, 2, i, 4)};
      if (length(n) < 1e-6) continue;
      n = normalize(n);
      const Vec3 back = decode_normal(encode_normal(n));
      CHECK(length(back - n) < 1e-6);
    }
  }

  SUBCASE("8-bit quantized round trip within 1e-2") {
    const Vec3 n = normalize(Vec3{1.0, 2.0, 3.0});
    Vec3 enc8 = encode_normal(n);
    enc8 = {std::round(enc8.x * 255.0) / 255.0, std::round(enc8.y * 255.0) / 255.0,
            std::round(enc8.z * 255.0) / 255.0};
    const Vec3 back = decode_normal(enc8);
    CHECK(length(back - n) < 1e-2);
  }

  CHECK_THROWS_AS(decode_normal({0.5, 0.5, 0.5}), NumericalError);
}

TEST_CASE("gbuffer validation") {
  GBuffer gb(4, 4);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) gb.normal.set_rgb(x, y, {0.0, 0.0, 0.0});
  gb.validate();  // all background

  gb.alpha.at(1, 1) = 1.0f;
  gb.normal.set_rgb(1, 1, {0.0, 0.0, 1.0});
  gb.validate();

  gb.normal.set_rgb(1, 1, {0.0, 0.0, 2.0});
  CHECK_THROWS_AS(gb.validate(), DataError);
  gb.normal.set_rgb(1, 1, {0.0, 0.0, -1.0});
  CHECK_THROWS_AS(gb.validate(), DataError);
}

TEST_CASE("camera rays and spaces") {
  Camera cam;
  cam.position = {0.0, 0.0, 4.0};
  cam.width = cam.height = 64;
  cam.validate();

  // The center ray looks straight down -z (toward the origin).
  const Vec3 dir = cam.ray_direction(31, 31);
  CHECK(dir.z < 0.0);
  CHECK(std::abs(dir.x) < 0.05);

  // World -z maps to camera-space +z (toward the viewer is +z).
  const Vec3 cz = cam.to_camera({0.0, 0.0, -1.0});
  CHECK(cz.z == doctest::Approx(1.0));
  const Vec3 back = cam.to_world(cz);
  CHECK(back.z == doctest::Approx(-1.0));

  Camera bad = cam;
  bad.look_at = bad.position;
  CHECK_THROWS_AS(bad.validate(), NumericalError);
}
