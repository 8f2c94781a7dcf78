// Copyright 2026 The Multilight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "multilight/gbuffer.hpp"
#include "multilight/image.hpp"
#include "multilight/light_rig.hpp"

namespace multilight {

/// Degradation simulator settings. Every operation is a pure function of
/// its seed; re-running a pipeline reproduces output bit for bit.
struct AugmentConfig {
  double trigger_probability = 0.6;  // per augmentation family
  double resize_low = 128.0;         // at a 256-wide image; scales with width
  double resize_high = 256.0;
  double distort_strength_low = 0.15;
  double distort_strength_high = 0.30;
  double brightness_low = 0.9;  // HSV value scale, whole image
  double brightness_high = 1.3;
  double pixel_noise_sigma = 0.05;  // per-pixel value scale N(1, sigma)
  double input_brightness_low = 0.9;
  double input_brightness_high = 1.1;
  double theta_sigma = 0.1;  // radians
  double phi_sigma = 0.02;
  double shuffle_probability = 0.5;
  double mix_probability = 0.3;

  void validate() const;  // throws DataError on out-of-range settings
};

/// Standard hexcone conversions on [0,1] RGB; h in [0, 360).
Vec3 rgb_to_hsv(const Vec3& rgb);
Vec3 hsv_to_rgb(const Vec3& hsv);

/// Bilinear resize with pixel-center mapping (identity when sizes match).
ImagePlane bilinear_resize(const ImagePlane& img, int new_width, int new_height);

/// Down-up resize round trip: side drawn uniformly from
/// [resize_low, resize_high] scaled to the image width.
ImagePlane degrade_resize(const ImagePlane& img, uint64_t seed,
                          double resize_low = 128.0, double resize_high = 256.0);

/// Warps through a 5x5 control lattice; each control point is offset
/// uniformly within +-strength * cell_size per axis.
ImagePlane grid_distort(const ImagePlane& img, double strength, uint64_t seed);

/// HSV brightness jitter: one image-level factor from
/// [brightness_low, brightness_high], then per-pixel N(1, sigma) scaling;
/// V clamps to [0,1]. The image is clamped to [0,1] first.
ImagePlane intensity_jitter(const ImagePlane& img, const AugmentConfig& cfg,
                            uint64_t seed);

/// Wraps an azimuth into [0, 2pi).
double wrap_theta(double theta);

/// Gaussian pose noise: theta wraps mod 2pi, phi clamps to [0, pi/2].
std::vector<LightPose> perturb_orientation(const std::vector<LightPose>& poses,
                                           const AugmentConfig& cfg,
                                           uint64_t seed);

/// Which families fired for one apply_augmentations call (for reporting
/// and trigger-frequency tests).
struct AugmentTrace {
  bool degradation = false;
  bool intensity = false;
  bool orientation = false;
  bool shuffled = false;
  bool mixed = false;
};

/// Full pipeline: clamps images to [0,1]; with cfg.trigger_probability
/// each, applies degradation (resize + grid distortion), intensity and
/// orientation perturbation; the input image receives its own brightness
/// factor when intensity fires; with mix_probability substitutes a
/// second double-strength pass; with shuffle_probability jointly permutes
/// the (image, pose) pairs. Fully deterministic in `seed`.
MultiLightSet apply_augmentations(const MultiLightSet& mls,
                                  const AugmentConfig& cfg, uint64_t seed,
                                  AugmentTrace* trace = nullptr);

}  // namespace multilight
