// Copyright 2026 The Multilight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "multilight/camera.hpp"
#include "multilight/gbuffer.hpp"
#include "multilight/image.hpp"
#include "multilight/sdf_scene.hpp"

namespace multilight {

/// Sphere-tracing limits shared by primary and shadow rays.
struct TraceLimits {
  int max_steps = 256;
  double hit_epsilon = 1e-4;
  double max_distance = 20.0;
};

/// Result of tracing one primary ray.
struct Hit {
  bool valid = false;
  double t = 0.0;       // Euclidean distance from the ray origin
  Vec3 point;           // world
  Vec3 normal;          // world, unit, front-facing to the ray
  int primitive = -1;
};

/// Sphere-traces one ray through the scene.
Hit trace_ray(const Scene& scene, const Vec3& origin, const Vec3& dir,
              const TraceLimits& limits = {});

/// True when the segment from `point` toward `light_pos` is unobstructed.
/// The origin is offset along the surface normal to avoid self-hits.
bool light_visible(const Scene& scene, const Vec3& point, const Vec3& normal,
                   const Vec3& light_pos, const TraceLimits& limits = {});

/// Ray-casts the scene into a G-buffer: camera-space normals (clamped to
/// the front-facing hemisphere), material fields, binary alpha and
/// hit depth. Misses write alpha = 0 and zeros elsewhere.
GBuffer raycast_gbuffer(const Scene& scene, const Camera& camera,
                        int threads = 0);

/// Direct point-light render with binary shadow rays; linear output.
ImagePlane render_pointlight(const Scene& scene, const Camera& camera,
                             const Vec3& light_pos, const Vec3& light_intensity,
                             int threads = 0);

/// Renders the full rig: images[i] lit from light_position(rig, i), poses
/// copied from the rig, alpha from the primary raycast. The input plane is
/// left zero; dataset generation fills it separately.
MultiLightSet render_multilight(const Scene& scene, const Camera& camera,
                                const LightRig& rig, int threads = 0);

/// Shades a G-buffer under one point light (no occlusion unless a scene
/// is supplied for shadow rays). Positions come from the hit-depth plane.
ImagePlane render_pointlight_gbuffer(const GBuffer& gb, const Camera& camera,
                                     const Vec3& light_pos,
                                     const Vec3& light_intensity,
                                     const Scene* shadow_scene = nullptr,
                                     int threads = 0);

/// Clamp to [0,1] and apply the sRGB transfer function.
ImagePlane tonemap_srgb(const ImagePlane& linear);

/// Scalar sRGB transfer (exposed for tests).
double srgb_encode(double linear_value);

}  // namespace multilight
