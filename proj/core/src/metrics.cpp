// Copyright 2026 The Multilight Authors
// SPDX-License-Identifier: Apache-2.0

#include "multilight/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "multilight/errors.hpp"

namespace multilight {

namespace {

bool masked(const ImagePlane& mask, int x, int y) {
  return mask.at(x, y) > 0.5f;
}

/// Neumaier-compensated accumulator; order-independent enough for the
/// fixed row-major traversal used throughout.
struct KahanSum {
  double sum = 0.0, comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

double masked_mse(const ImagePlane& pred, const ImagePlane& gt,
                  const ImagePlane& mask) {
  KahanSum acc;
  int64_t count = 0;
  for (int y = 0; y < pred.height(); ++y) {
    for (int x = 0; x < pred.width(); ++x) {
      if (!masked(mask, x, y)) continue;
      for (int c = 0; c < pred.channels(); ++c) {
        const double d = double(pred.at(x, y, c)) - double(gt.at(x, y, c));
        acc.add(d * d);
      }
      count += pred.channels();
    }
  }
  if (count == 0) throw DataError("metrics: empty mask");
  return acc.value() / double(count);
}

double psnr_from_mse(double mse) {
  if (mse < 1e-10) return 99.0;
  return 10.0 * std::log10(1.0 / mse);
}

/// SSIM over masked window centers with border-renormalized Gaussian
/// weights; channels averaged.
double masked_ssim(const ImagePlane& pred, const ImagePlane& gt,
                   const ImagePlane& mask) {
  constexpr int kRadius = 5;  // 11x11 window
  constexpr double kSigma = 1.5;
  constexpr double kC1 = 0.01 * 0.01;  // (K1 L)^2, L = 1
  constexpr double kC2 = 0.03 * 0.03;

  double weights[2 * kRadius + 1][2 * kRadius + 1];
  for (int dy = -kRadius; dy <= kRadius; ++dy)
    for (int dx = -kRadius; dx <= kRadius; ++dx)
      weights[dy + kRadius][dx + kRadius] =
          std::exp(-(dx * dx + dy * dy) / (2.0 * kSigma * kSigma));

  KahanSum total;
  int64_t centers = 0;
  for (int y = 0; y < pred.height(); ++y) {
    for (int x = 0; x < pred.width(); ++x) {
      if (!masked(mask, x, y)) continue;
      double channel_sum = 0.0;
      for (int c = 0; c < pred.channels(); ++c) {
        double wsum = 0.0, mx = 0.0, my = 0.0;
        for (int dy = -kRadius; dy <= kRadius; ++dy) {
          const int yy = y + dy;
          if (yy < 0 || yy >= pred.height()) continue;
          for (int dx = -kRadius; dx <= kRadius; ++dx) {
            const int xx = x + dx;
            if (xx < 0 || xx >= pred.width()) continue;
            const double wv = weights[dy + kRadius][dx + kRadius];
            wsum += wv;
            mx += wv * pred.at(xx, yy, c);
            my += wv * gt.at(xx, yy, c);
          }
        }
        mx /= wsum;
        my /= wsum;
        double vx = 0.0, vy = 0.0, cov = 0.0;
        for (int dy = -kRadius; dy <= kRadius; ++dy) {
          const int yy = y + dy;
          if (yy < 0 || yy >= pred.height()) continue;
          for (int dx = -kRadius; dx <= kRadius; ++dx) {
            const int xx = x + dx;
            if (xx < 0 || xx >= pred.width()) continue;
            const double wv = weights[dy + kRadius][dx + kRadius];
            const double ex = pred.at(xx, yy, c) - mx;
            const double ey = gt.at(xx, yy, c) - my;
            vx += wv * ex * ex;
            vy += wv * ey * ey;
            cov += wv * ex * ey;
          }
        }
        vx /= wsum;
        vy /= wsum;
        cov /= wsum;
        channel_sum += ((2.0 * mx * my + kC1) * (2.0 * cov + kC2)) /
                       ((mx * mx + my * my + kC1) * (vx + vy + kC2));
      }
      total.add(channel_sum / pred.channels());
      ++centers;
    }
  }
  if (centers == 0) throw DataError("metrics: empty mask");
  return total.value() / double(centers);
}

}  // namespace

NormalErrorStats angular_error_stats(const ImagePlane& pred,
                                     const ImagePlane& gt,
                                     const ImagePlane& mask) {
  std::vector<double> errors;
  errors.reserve(size_t(pred.pixel_count()));
  for (int y = 0; y < pred.height(); ++y) {
    for (int x = 0; x < pred.width(); ++x) {
      if (!masked(mask, x, y)) continue;
      const Vec3 a = normalize(pred.rgb(x, y));
      const Vec3 b = normalize(gt.rgb(x, y));
      const double c = clamp(dot(a, b), -1.0, 1.0);
      errors.push_back(deg_from_rad(std::acos(c)));
    }
  }
  if (errors.empty()) throw DataError("metrics: empty mask");

  NormalErrorStats stats;
  KahanSum acc;
  for (const double e : errors) acc.add(e);
  stats.mean_deg = acc.value() / double(errors.size());

  std::vector<double> sorted = errors;
  std::sort(sorted.begin(), sorted.end());
  const size_t n = sorted.size();
  stats.median_deg = (n % 2 == 1)
                         ? sorted[n / 2]
                         : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

  for (size_t k = 0; k < kAngularThresholds.size(); ++k) {
    int64_t within = 0;
    for (const double e : errors)
      if (e <= kAngularThresholds[k]) ++within;
    stats.accuracy[k] = 100.0 * double(within) / double(n);
  }
  return stats;
}

ImageMetrics image_metrics(const ImagePlane& pred, const ImagePlane& gt,
                           const ImagePlane& mask) {
  if (!pred.same_shape(gt)) throw DataError("metrics: image shapes disagree");
  ImageMetrics m;
  const double mse = masked_mse(pred, gt, mask);
  m.psnr_db = psnr_from_mse(mse);
  m.rmse = std::sqrt(mse);
  m.ssim = masked_ssim(pred, gt, mask);
  return m;
}

double normal_loss(const ImagePlane& pred, const ImagePlane& gt,
                   const ImagePlane& mask, double lambda1) {
  KahanSum acc;
  int64_t count = 0;
  for (int y = 0; y < pred.height(); ++y) {
    for (int x = 0; x < pred.width(); ++x) {
      if (!masked(mask, x, y)) continue;
      const Vec3 a = pred.rgb(x, y);
      const Vec3 b = gt.rgb(x, y);
      const double la = length(a), lb = length(b);
      const double cosv = (la > 0.0 && lb > 0.0) ? dot(a, b) / (la * lb) : 0.0;
      acc.add((1.0 - cosv) + lambda1 * length_squared(a - b));
      ++count;
    }
  }
  if (count == 0) throw DataError("metrics: empty mask");
  return acc.value() / double(count);
}

double pbr_loss(const GBuffer& pred, const GBuffer& gt, const ImagePlane& mask) {
  return masked_mse(pred.albedo, gt.albedo, mask) +
         masked_mse(pred.roughness, gt.roughness, mask) +
         masked_mse(pred.metallic, gt.metallic, mask);
}

double combined_score(double normal_loss_value, double pbr_loss_value) {
  return (4.0 * normal_loss_value + pbr_loss_value) / 5.0;
}

MetricsReport eval_report(
    const GBuffer& pred, const GBuffer& gt,
    const std::vector<std::pair<ImagePlane, ImagePlane>>& relit_pairs) {
  MetricsReport rep;
  const ImagePlane& mask = gt.alpha;
  rep.normal = angular_error_stats(pred.normal, gt.normal, mask);
  rep.albedo = image_metrics(pred.albedo, gt.albedo, mask);
  rep.roughness = image_metrics(pred.roughness, gt.roughness, mask);
  rep.metallic = image_metrics(pred.metallic, gt.metallic, mask);
  if (!relit_pairs.empty()) {
    ImageMetrics avg;
    for (const auto& [p, g] : relit_pairs) {
      const ImageMetrics m = image_metrics(p, g, mask);
      avg.psnr_db += m.psnr_db;
      avg.rmse += m.rmse;
      avg.ssim += m.ssim;
    }
    const double n = double(relit_pairs.size());
    avg.psnr_db /= n;
    avg.rmse /= n;
    avg.ssim /= n;
    rep.relighting = avg;
  }
  rep.normal_loss = normal_loss(pred.normal, gt.normal, mask);
  rep.pbr_loss = pbr_loss(pred, gt, mask);
  rep.combined = combined_score(rep.normal_loss, rep.pbr_loss);
  return rep;
}

namespace {

nlohmann::json image_metrics_json(const ImageMetrics& m) {
  return {{"psnr_db", m.psnr_db}, {"rmse", m.rmse}, {"ssim", m.ssim}};
}

}  // namespace

std::string metrics_report_to_json(const MetricsReport& rep) {
  nlohmann::json j;
  j["normal"] = {{"mean_deg", rep.normal.mean_deg},
                 {"median_deg", rep.normal.median_deg},
                 {"accuracy",
                  {{"3.0", rep.normal.accuracy[0]},
                   {"5.0", rep.normal.accuracy[1]},
                   {"7.5", rep.normal.accuracy[2]},
                   {"11.25", rep.normal.accuracy[3]},
                   {"22.5", rep.normal.accuracy[4]},
                   {"30.0", rep.normal.accuracy[5]}}}};
  j["albedo"] = image_metrics_json(rep.albedo);
  j["roughness"] = image_metrics_json(rep.roughness);
  j["metallic"] = image_metrics_json(rep.metallic);
  if (rep.relighting)
    j["relighting"] = image_metrics_json(*rep.relighting);
  else
    j["relighting"] = nullptr;
  j["normal_loss"] = rep.normal_loss;
  j["pbr_loss"] = rep.pbr_loss;
  j["combined"] = rep.combined;
  return j.dump(2);
}

}  // namespace multilight
