// Copyright 2026 The Multilight Authors
// SPDX-License-Identifier: Apache-2.0

#include "multilight/augment.hpp"

#include <algorithm>
#include <cmath>

#include "multilight/errors.hpp"
#include "multilight/rng.hpp"

namespace multilight {

void AugmentConfig::validate() const {
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!prob(trigger_probability) || !prob(shuffle_probability) ||
      !prob(mix_probability))
    throw DataError("augment config: probability out of [0,1]");
  if (resize_low > resize_high || distort_strength_low > distort_strength_high ||
      brightness_low > brightness_high ||
      input_brightness_low > input_brightness_high)
    throw DataError("augment config: low bound exceeds high bound");
  if (pixel_noise_sigma < 0.0 || theta_sigma < 0.0 || phi_sigma < 0.0)
    throw DataError("augment config: negative sigma");
}

Vec3 rgb_to_hsv(const Vec3& rgb) {
  const double r = rgb.x, g = rgb.y, b = rgb.z;
  const double maxc = std::max(r, std::max(g, b));
  const double minc = std::min(r, std::min(g, b));
  const double delta = maxc - minc;
  double h = 0.0;
  if (delta > 0.0) {
    if (maxc == r)
      h = 60.0 * std::fmod((g - b) / delta, 6.0);
    else if (maxc == g)
      h = 60.0 * ((b - r) / delta + 2.0);
    else
      h = 60.0 * ((r - g) / delta + 4.0);
    if (h < 0.0) h += 360.0;
  }
  const double s = maxc > 0.0 ? delta / maxc : 0.0;
  return {h, s, maxc};
}

Vec3 hsv_to_rgb(const Vec3& hsv) {
  const double h = hsv.x, s = hsv.y, v = hsv.z;
  const double c = v * s;
  const double hp = h / 60.0;
  const double xval = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r = 0.0, g = 0.0, b = 0.0;
  if (hp < 1.0) {
    r = c; g = xval;
  } else if (hp < 2.0) {
    r = xval; g = c;
  } else if (hp < 3.0) {
    g = c; b = xval;
  } else if (hp < 4.0) {
    g = xval; b = c;
  } else if (hp < 5.0) {
    r = xval; b = c;
  } else {
    r = c; b = xval;
  }
  const double m = v - c;
  return {r + m, g + m, b + m};
}

ImagePlane bilinear_resize(const ImagePlane& img, int new_width, int new_height) {
  if (new_width == img.width() && new_height == img.height()) return img;
  ImagePlane out(new_width, new_height, img.channels());
  const double sx = double(img.width()) / new_width;
  const double sy = double(img.height()) / new_height;
  for (int y = 0; y < new_height; ++y) {
    const double fy = (y + 0.5) * sy - 0.5;
    const double fy0 = std::floor(fy);
    const double ty = fy - fy0;
    const int y0 = int(clamp(fy0, 0.0, img.height() - 1.0));
    const int y1 = int(clamp(fy0 + 1.0, 0.0, img.height() - 1.0));
    for (int x = 0; x < new_width; ++x) {
      const double fx = (x + 0.5) * sx - 0.5;
      const double fx0 = std::floor(fx);
      const double tx = fx - fx0;
      const int x0 = int(clamp(fx0, 0.0, img.width() - 1.0));
      const int x1 = int(clamp(fx0 + 1.0, 0.0, img.width() - 1.0));
      for (int c = 0; c < img.channels(); ++c) {
        const double v00 = img.at(x0, y0, c), v10 = img.at(x1, y0, c);
        const double v01 = img.at(x0, y1, c), v11 = img.at(x1, y1, c);
        out.at(x, y, c) = float((v00 * (1.0 - tx) + v10 * tx) * (1.0 - ty) +
                                (v01 * (1.0 - tx) + v11 * tx) * ty);
      }
    }
  }
  return out;
}

ImagePlane degrade_resize(const ImagePlane& img, uint64_t seed,
                          double resize_low, double resize_high) {
  // Bounds are specified at a 256-wide image and scale with the input.
  const double scale = img.width() / 256.0;
  const int lo = std::max(1, int(std::lround(resize_low * scale)));
  const int hi = std::max(lo, int(std::lround(resize_high * scale)));
  const double u = rng_uniform(seed, kStreamAugResize, 0, 0);
  const int side = std::min(hi, lo + int(u * double(hi - lo + 1)));
  if (side == img.width() && side == img.height()) return img;
  const ImagePlane down = bilinear_resize(img, side, side);
  return bilinear_resize(down, img.width(), img.height());
}

ImagePlane grid_distort(const ImagePlane& img, double strength, uint64_t seed) {
  constexpr int kGrid = 5;
  const int w = img.width(), h = img.height();
  const double cell_w = double(w - 1) / (kGrid - 1);
  const double cell_h = double(h - 1) / (kGrid - 1);

  double dx[kGrid][kGrid], dy[kGrid][kGrid];
  for (int j = 0; j < kGrid; ++j) {
    for (int i = 0; i < kGrid; ++i) {
      const uint64_t k = uint64_t(j) * kGrid + i;
      dx[j][i] = (2.0 * rng_uniform(seed, kStreamAugDistort, k, 0) - 1.0) *
                 strength * cell_w;
      dy[j][i] = (2.0 * rng_uniform(seed, kStreamAugDistort, k, 1) - 1.0) *
                 strength * cell_h;
    }
  }

  ImagePlane out(w, h, img.channels());
  for (int y = 0; y < h; ++y) {
    const double gy = y / cell_h;
    const int j0 = std::min(int(gy), kGrid - 2);
    const double tj = gy - j0;
    for (int x = 0; x < w; ++x) {
      const double gx = x / cell_w;
      const int i0 = std::min(int(gx), kGrid - 2);
      const double ti = gx - i0;
      const double ox =
          (dx[j0][i0] * (1.0 - ti) + dx[j0][i0 + 1] * ti) * (1.0 - tj) +
          (dx[j0 + 1][i0] * (1.0 - ti) + dx[j0 + 1][i0 + 1] * ti) * tj;
      const double oy =
          (dy[j0][i0] * (1.0 - ti) + dy[j0][i0 + 1] * ti) * (1.0 - tj) +
          (dy[j0 + 1][i0] * (1.0 - ti) + dy[j0 + 1][i0 + 1] * ti) * tj;

      // Sample the source at the displaced position, clamped to borders.
      const double fx = clamp(x + ox, 0.0, w - 1.0);
      const double fy = clamp(y + oy, 0.0, h - 1.0);
      const int x0 = int(fx), y0 = int(fy);
      const int x1 = std::min(x0 + 1, w - 1), y1 = std::min(y0 + 1, h - 1);
      const double tx = fx - x0, ty = fy - y0;
      for (int c = 0; c < img.channels(); ++c) {
        const double v00 = img.at(x0, y0, c), v10 = img.at(x1, y0, c);
        const double v01 = img.at(x0, y1, c), v11 = img.at(x1, y1, c);
        out.at(x, y, c) = float((v00 * (1.0 - tx) + v10 * tx) * (1.0 - ty) +
                                (v01 * (1.0 - tx) + v11 * tx) * ty);
      }
    }
  }
  return out;
}

ImagePlane intensity_jitter(const ImagePlane& img, const AugmentConfig& cfg,
                            uint64_t seed) {
  ImagePlane out = img;
  out.clamp01();
  const double factor = rng_uniform(seed, kStreamAugIntensity, 0, 0,
                                    cfg.brightness_low, cfg.brightness_high);
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      const uint64_t pixel = uint64_t(y) * out.width() + uint64_t(x);
      double noise = 1.0;
      if (cfg.pixel_noise_sigma > 0.0)
        noise = 1.0 + cfg.pixel_noise_sigma *
                          rng_normal(seed, kStreamAugIntensity, pixel + 1, 0);
      Vec3 hsv = rgb_to_hsv(out.rgb(x, y));
      hsv.z = clamp(hsv.z * factor * noise, 0.0, 1.0);
      out.set_rgb(x, y, hsv_to_rgb(hsv));
    }
  }
  return out;
}

double wrap_theta(double theta) {
  theta = std::fmod(theta, kTwoPi);
  if (theta < 0.0) theta += kTwoPi;
  return theta;
}

std::vector<LightPose> perturb_orientation(const std::vector<LightPose>& poses,
                                           const AugmentConfig& cfg,
                                           uint64_t seed) {
  std::vector<LightPose> out;
  out.reserve(poses.size());
  for (size_t i = 0; i < poses.size(); ++i) {
    double theta = poses[i].theta;
    double phi = poses[i].phi;
    if (cfg.theta_sigma > 0.0)
      theta += cfg.theta_sigma * rng_normal(seed, kStreamAugOrientation, i, 0);
    if (cfg.phi_sigma > 0.0)
      phi += cfg.phi_sigma * rng_normal(seed, kStreamAugOrientation, i, 2);
    out.push_back({wrap_theta(theta), clamp(phi, 0.0, kPi / 2.0)});
  }
  return out;
}

namespace {

/// Brightness-only HSV scale for the input image (no pixel noise).
ImagePlane input_brightness(const ImagePlane& img, const AugmentConfig& cfg,
                            uint64_t seed) {
  AugmentConfig narrow = cfg;
  narrow.brightness_low = cfg.input_brightness_low;
  narrow.brightness_high = cfg.input_brightness_high;
  narrow.pixel_noise_sigma = 0.0;
  return intensity_jitter(img, narrow, seed);
}

/// Core pass shared by the normal and the "mixed" double-strength path.
void augment_images(MultiLightSet& set, const AugmentConfig& cfg, uint64_t seed,
                    bool degradation, bool intensity, bool orientation) {
  if (degradation) {
    for (size_t i = 0; i < set.images.size(); ++i) {
      const uint64_t s_resize = hash_key(seed, kStreamAugResize, i);
      const uint64_t s_distort = hash_key(seed, kStreamAugDistort, i);
      const double strength =
          rng_uniform(seed, kStreamAugDistort, 1000 + i, 0,
                      cfg.distort_strength_low, cfg.distort_strength_high);
      set.images[i] =
          degrade_resize(set.images[i], s_resize, cfg.resize_low, cfg.resize_high);
      set.images[i] = grid_distort(set.images[i], strength, s_distort);
    }
  }
  if (intensity) {
    for (size_t i = 0; i < set.images.size(); ++i)
      set.images[i] =
          intensity_jitter(set.images[i], cfg, hash_key(seed, kStreamAugIntensity, i));
    set.input = input_brightness(set.input, cfg, hash_key(seed, kStreamAugInput, 0));
  }
  if (orientation)
    set.poses = perturb_orientation(set.poses, cfg,
                                    hash_key(seed, kStreamAugOrientation, 0));
}

/// Stand-in for mixing in generated imagery: the same families at double
/// strength (wider brightness and distortion ranges, doubled sigmas,
/// deeper downsampling).
AugmentConfig doubled(const AugmentConfig& cfg) {
  AugmentConfig d = cfg;
  d.resize_low = cfg.resize_low * 0.5;
  d.distort_strength_low = cfg.distort_strength_low * 2.0;
  d.distort_strength_high = cfg.distort_strength_high * 2.0;
  d.brightness_low = 1.0 - 2.0 * (1.0 - cfg.brightness_low);
  d.brightness_high = 1.0 + 2.0 * (cfg.brightness_high - 1.0);
  d.input_brightness_low = 1.0 - 2.0 * (1.0 - cfg.input_brightness_low);
  d.input_brightness_high = 1.0 + 2.0 * (cfg.input_brightness_high - 1.0);
  d.pixel_noise_sigma = cfg.pixel_noise_sigma * 2.0;
  d.theta_sigma = cfg.theta_sigma * 2.0;
  d.phi_sigma = cfg.phi_sigma * 2.0;
  return d;
}

}  // namespace

MultiLightSet apply_augmentations(const MultiLightSet& mls,
                                  const AugmentConfig& cfg, uint64_t seed,
                                  AugmentTrace* trace) {
  cfg.validate();
  MultiLightSet out = mls;
  for (auto& img : out.images) img.clamp01();
  out.input.clamp01();

  AugmentTrace tr;
  tr.degradation =
      rng_uniform(seed, kStreamAugTrigger, 0, 0) < cfg.trigger_probability;
  tr.intensity =
      rng_uniform(seed, kStreamAugTrigger, 1, 0) < cfg.trigger_probability;
  tr.orientation =
      rng_uniform(seed, kStreamAugTrigger, 2, 0) < cfg.trigger_probability;
  tr.shuffled =
      rng_uniform(seed, kStreamAugTrigger, 3, 0) < cfg.shuffle_probability;
  tr.mixed = rng_uniform(seed, kStreamAugTrigger, 4, 0) < cfg.mix_probability;

  augment_images(out, cfg, seed, tr.degradation, tr.intensity, tr.orientation);

  if (tr.mixed) {
    const uint64_t mix_seed = hash_key(seed, kStreamAugMix, 0);
    augment_images(out, doubled(cfg), mix_seed, true, true, true);
  }

  if (tr.shuffled && out.images.size() > 1) {
    // Fisher-Yates over joint (image, pose) pairs.
    for (size_t k = out.images.size() - 1; k > 0; --k) {
      const double u = rng_uniform(seed, kStreamAugShuffle, k, 0);
      const size_t j = size_t(u * double(k + 1));
      std::swap(out.images[k], out.images[std::min(j, k)]);
      std::swap(out.poses[k], out.poses[std::min(j, k)]);
    }
  }

  if (trace) *trace = tr;
  return out;
}

}  // namespace multilight
