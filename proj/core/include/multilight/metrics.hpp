// Copyright 2026 The Multilight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "multilight/gbuffer.hpp"
#include "multilight/image.hpp"

namespace multilight {

/// Angular accuracy thresholds, in degrees.
inline constexpr std::array<double, 6> kAngularThresholds = {3.0,   5.0,  7.5,
                                                             11.25, 22.5, 30.0};

struct NormalErrorStats {
  double mean_deg = 0.0;
  double median_deg = 0.0;
  std::array<double, 6> accuracy{};  // percentage at kAngularThresholds
};

struct ImageMetrics {
  double psnr_db = 0.0;
  double rmse = 0.0;
  double ssim = 0.0;
};

/// Table-style evaluation record. Relighting metrics are present only
/// when relit pairs were supplied.
struct MetricsReport {
  NormalErrorStats normal;
  ImageMetrics albedo;
  ImageMetrics roughness;
  ImageMetrics metallic;
  std::optional<ImageMetrics> relighting;
  double normal_loss = 0.0;
  double pbr_loss = 0.0;
  double combined = 0.0;
};

/// Per-pixel angular error arccos(clamp(n_hat . n, -1, 1)) in degrees over
/// the mask; even-count median is the mean of the two middle values;
/// accuracy@tau is the percentage with error <= tau.
/// Throws DataError on an empty mask.
NormalErrorStats angular_error_stats(const ImagePlane& pred,
                                     const ImagePlane& gt,
                                     const ImagePlane& mask);

/// PSNR = 10 log10(1 / MSE), capped at 99 dB when MSE < 1e-10;
/// RMSE = sqrt(MSE); SSIM uses an 11x11 Gaussian window with sigma 1.5,
/// K1 = 0.01, K2 = 0.03, dynamic range 1, averaged over masked window
/// centers (window weights renormalize at image borders).
ImageMetrics image_metrics(const ImagePlane& pred, const ImagePlane& gt,
                           const ImagePlane& mask);

/// Cosine loss with an MSE stabilizer:
/// mean over mask of (1 - cos(n, n_hat)) + lambda1 |n - n_hat|^2.
double normal_loss(const ImagePlane& pred, const ImagePlane& gt,
                   const ImagePlane& mask, double lambda1 = 0.25);

/// MSE(albedo) + MSE(roughness) + MSE(metallic) over the mask.
double pbr_loss(const GBuffer& pred, const GBuffer& gt, const ImagePlane& mask);

/// Weighted sum at the 4:1 normals-to-materials ratio, normalized by 5.
double combined_score(double normal_loss_value, double pbr_loss_value);

/// Assembles the full report; relighting metrics average over the pairs.
/// Evaluation is masked by the ground-truth alpha.
MetricsReport eval_report(
    const GBuffer& pred, const GBuffer& gt,
    const std::vector<std::pair<ImagePlane, ImagePlane>>& relit_pairs = {});

/// Documented JSON form, one key per report field.
std::string metrics_report_to_json(const MetricsReport& report);

}  // namespace multilight
