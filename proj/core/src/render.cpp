// Copyright 2026 The Multilight Authors
// SPDX-License-Identifier: Apache-2.0

#include "multilight/render.hpp"

#include <cmath>

#include "multilight/parallel.hpp"

namespace multilight {

namespace {
constexpr double kShadowOffset = 1e-3;
}

Hit trace_ray(const Scene& scene, const Vec3& origin, const Vec3& dir,
              const TraceLimits& limits) {
  Hit hit;
  const double step_scale = scene.step_scale();
  double t = 0.0;
  for (int step = 0; step < limits.max_steps; ++step) {
    const Vec3 p = origin + dir * t;
    int nearest = -1;
    const double d = scene.sdf(p, &nearest);
    if (d < limits.hit_epsilon) {
      hit.valid = true;
      hit.t = t;
      hit.point = p;
      hit.primitive = nearest;
      Vec3 g = scene.sdf_gradient(p);
      const double glen = length(g);
      hit.normal = glen > 1e-12 ? g / glen : -dir;
      // Keep the normal on the front side of the ray.
      if (dot(hit.normal, dir) > 0.0) hit.normal = -hit.normal;
      return hit;
    }
    t += d * step_scale;
    if (t > limits.max_distance) break;
  }
  return hit;
}

bool light_visible(const Scene& scene, const Vec3& point, const Vec3& normal,
                   const Vec3& light_pos, const TraceLimits& limits) {
  const Vec3 origin = point + normal * kShadowOffset;
  const Vec3 to_light = light_pos - origin;
  const double dist = length(to_light);
  const Vec3 dir = to_light / dist;
  TraceLimits shadow = limits;
  shadow.max_distance = dist - kShadowOffset;
  const Hit occluder = trace_ray(scene, origin, dir, shadow);
  return !occluder.valid || occluder.t >= shadow.max_distance;
}

namespace {

/// One primary-visibility pass shared by the render entry points.
struct PrimaryHits {
  std::vector<Hit> hits;  // row-major
  int width = 0, height = 0;
};

PrimaryHits trace_primary(const Scene& scene, const Camera& camera, int threads) {
  camera.validate();
  PrimaryHits out;
  out.width = camera.width;
  out.height = camera.height;
  out.hits.resize(size_t(camera.width) * camera.height);
  parallel_for(camera.height, threads, [&](int64_t y) {
    for (int x = 0; x < camera.width; ++x) {
      const Vec3 dir = camera.ray_direction(x, int(y));
      out.hits[size_t(y) * camera.width + x] =
          trace_ray(scene, camera.position, dir);
    }
  });
  return out;
}

}  // namespace

GBuffer raycast_gbuffer(const Scene& scene, const Camera& camera, int threads) {
  const PrimaryHits primary = trace_primary(scene, camera, threads);
  GBuffer gb(camera.width, camera.height);
  parallel_for(camera.height, threads, [&](int64_t y) {
    for (int x = 0; x < camera.width; ++x) {
      const Hit& hit = primary.hits[size_t(y) * camera.width + x];
      if (!hit.valid) continue;
      Vec3 n_cam = camera.to_camera(hit.normal);
      // Storage contract: front-facing hemisphere in camera space.
      if (n_cam.z < 0.0) {
        n_cam.z = 0.0;
        const double len = length(n_cam);
        n_cam = len > 1e-12 ? n_cam / len : Vec3(0.0, 0.0, 1.0);
      }
      const MaterialSample mat = scene.material_at(hit.point, hit.primitive);
      gb.normal.set_rgb(x, int(y), n_cam);
      gb.albedo.set_rgb(x, int(y), mat.albedo);
      gb.roughness.at(x, int(y)) = float(mat.roughness);
      gb.metallic.at(x, int(y)) = float(mat.metallic);
      gb.alpha.at(x, int(y)) = 1.0f;
      gb.depth.at(x, int(y)) = float(hit.t);
    }
  });
  return gb;
}

namespace {

ImagePlane shade_hits(const Scene& scene, const Camera& camera,
                      const PrimaryHits& primary, const Vec3& light_pos,
                      const Vec3& light_intensity, int threads) {
  ImagePlane img(camera.width, camera.height, 3);
  parallel_for(camera.height, threads, [&](int64_t y) {
    for (int x = 0; x < camera.width; ++x) {
      const Hit& hit = primary.hits[size_t(y) * camera.width + x];
      if (!hit.valid) continue;
      const Vec3 view = normalize(camera.position - hit.point);
      const MaterialSample mat = scene.material_at(hit.point, hit.primitive);
      const Vec3 to_light = light_pos - hit.point;
      bool visible = true;
      if (dot(hit.normal, to_light) > 0.0)
        visible = light_visible(scene, hit.point, hit.normal, light_pos);
      img.set_rgb(x, int(y),
                  shade_point(hit.normal, view, hit.point, mat, light_pos,
                              light_intensity, visible));
    }
  });
  return img;
}

}  // namespace

ImagePlane render_pointlight(const Scene& scene, const Camera& camera,
                             const Vec3& light_pos, const Vec3& light_intensity,
                             int threads) {
  const PrimaryHits primary = trace_primary(scene, camera, threads);
  return shade_hits(scene, camera, primary, light_pos, light_intensity, threads);
}

MultiLightSet render_multilight(const Scene& scene, const Camera& camera,
                                const LightRig& rig, int threads) {
  rig.validate();
  const PrimaryHits primary = trace_primary(scene, camera, threads);
  MultiLightSet mls;
  mls.poses = rig.poses;
  mls.input = ImagePlane(camera.width, camera.height, 3);
  mls.alpha = ImagePlane(camera.width, camera.height, 1);
  for (size_t y = 0; y < size_t(camera.height); ++y)
    for (int x = 0; x < camera.width; ++x)
      if (primary.hits[y * camera.width + x].valid)
        mls.alpha.at(x, int(y)) = 1.0f;
  mls.images.reserve(rig.size());
  for (size_t i = 0; i < rig.size(); ++i) {
    const Vec3 pos = light_position(rig, i, camera);
    mls.images.push_back(
        shade_hits(scene, camera, primary, pos, rig.intensity, threads));
  }
  return mls;
}

ImagePlane render_pointlight_gbuffer(const GBuffer& gb, const Camera& camera,
                                     const Vec3& light_pos,
                                     const Vec3& light_intensity,
                                     const Scene* shadow_scene, int threads) {
  ImagePlane img(gb.width(), gb.height(), 3);
  parallel_for(gb.height(), threads, [&](int64_t y) {
    for (int x = 0; x < gb.width(); ++x) {
      if (!gb.foreground(x, int(y))) continue;
      const Vec3 dir = camera.ray_direction(x, int(y));
      const Vec3 point = camera.position + dir * double(gb.depth.at(x, int(y)));
      const Vec3 n_world = camera.to_world(gb.normal.rgb(x, int(y)));
      MaterialSample mat;
      mat.albedo = gb.albedo.rgb(x, int(y));
      mat.roughness = gb.roughness.at(x, int(y));
      mat.metallic = gb.metallic.at(x, int(y));
      bool visible = true;
      if (shadow_scene && dot(n_world, light_pos - point) > 0.0)
        visible = light_visible(*shadow_scene, point, n_world, light_pos);
      img.set_rgb(x, int(y),
                  shade_point(n_world, normalize(camera.position - point), point,
                              mat, light_pos, light_intensity, visible));
    }
  });
  return img;
}

double srgb_encode(double v) {
  v = clamp(v, 0.0, 1.0);
  return v <= 0.0031308 ? v * 12.92 : 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

ImagePlane tonemap_srgb(const ImagePlane& linear) {
  ImagePlane out = linear;
  float* d = out.data();
  for (size_t i = 0; i < out.size(); ++i) d[i] = float(srgb_encode(d[i]));
  return out;
}

}  // namespace multilight
