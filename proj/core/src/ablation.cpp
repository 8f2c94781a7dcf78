// Copyright 2026 The Multilight Authors
// SPDX-License-Identifier: Apache-2.0

#include "multilight/ablation.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "multilight/errors.hpp"
#include "multilight/parallel.hpp"

namespace multilight {

std::vector<int> ablation_subset(int light_count) {
  switch (light_count) {
    case 1:
      return {8};
    case 3:
      return {0, 3, 6};
    case 6:
      return {0, 1, 3, 4, 6, 7};
    case 9:
      return {0, 1, 2, 3, 4, 5, 6, 7, 8};
    default:
      throw DataError("ablation: unsupported light count " +
                      std::to_string(light_count));
  }
}

namespace {

MetricsReport average_reports(const std::vector<MetricsReport>& reports) {
  MetricsReport avg;
  const double n = double(reports.size());
  for (const auto& r : reports) {
    avg.normal.mean_deg += r.normal.mean_deg / n;
    avg.normal.median_deg += r.normal.median_deg / n;
    for (size_t k = 0; k < avg.normal.accuracy.size(); ++k)
      avg.normal.accuracy[k] += r.normal.accuracy[k] / n;
    auto add = [n](ImageMetrics& acc, const ImageMetrics& m) {
      acc.psnr_db += m.psnr_db / n;
      acc.rmse += m.rmse / n;
      acc.ssim += m.ssim / n;
    };
    add(avg.albedo, r.albedo);
    add(avg.roughness, r.roughness);
    add(avg.metallic, r.metallic);
    avg.normal_loss += r.normal_loss / n;
    avg.pbr_loss += r.pbr_loss / n;
    avg.combined += r.combined / n;
  }
  return avg;
}

}  // namespace

AblationResult run_ablation(const DatasetManifest& manifest,
                            const std::string& root,
                            const AblationConfig& cfg) {
  if (manifest.samples.empty()) throw DataError("ablation: empty manifest");
  AblationResult result;
  result.sample_count = manifest.samples.size();

  std::vector<int> counts = cfg.light_counts;
  std::sort(counts.begin(), counts.end());

  for (const int light_count : counts) {
    const std::vector<int> subset = ablation_subset(light_count);
    for (const int idx : subset) {
      if (size_t(idx) >= manifest.samples.front().rig.size())
        throw DataError("ablation: light index " + std::to_string(idx) +
                        " exceeds available lights");
    }

    std::vector<MetricsReport> reports(manifest.samples.size());
    // One sample per task; per-sample results land in their own slots, so
    // aggregation order (and output bytes) never depends on thread count.
    parallel_for(int64_t(manifest.samples.size()), cfg.threads, [&](int64_t i) {
      const SampleEntry& entry = manifest.samples[size_t(i)];
      const LoadedSample sample = load_sample(root, entry);

      MultiLightSet sub;
      sub.input = sample.mls.input;
      sub.alpha = sample.mls.alpha;
      for (const int li : subset) {
        sub.images.push_back(sample.mls.images[size_t(li)]);
        sub.poses.push_back(sample.mls.poses[size_t(li)]);
      }

      auto [gb, report] = solve_gbuffer(sample.mls.input, sub, entry.camera,
                                        entry.rig, cfg.solver, &sample.depth, 1);
      const GBuffer gt =
          read_gbuffer((std::filesystem::path(root) / entry.name).string());
      reports[size_t(i)] = eval_report(gb, gt);
    });

    AblationEntry entry;
    entry.light_count = light_count;
    entry.subset = subset;
    entry.metrics = average_reports(reports);
    result.entries.push_back(std::move(entry));
  }
  return result;
}

std::string ablation_to_json(const AblationResult& result) {
  nlohmann::json j;
  j["sample_count"] = result.sample_count;
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : result.entries) {
    nlohmann::json m = nlohmann::json::parse(metrics_report_to_json(e.metrics));
    entries.push_back({{"light_count", e.light_count},
                       {"subset", e.subset},
                       {"metrics", m}});
  }
  j["entries"] = entries;
  return j.dump(2);
}

std::string ablation_table(const AblationResult& result) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-8s %-16s %-16s %-16s %s\n", "Lights",
                "Albedo", "Roughness", "Metallic", "Normal");
  out += line;
  std::snprintf(line, sizeof(line), "%-8s %-8s %-7s %-8s %-7s %-8s %-7s %-7s %-7s %-7s %-7s %-7s\n",
                "", "PSNR", "RMSE", "PSNR", "RMSE", "PSNR", "RMSE", "MAE",
                "5\xc2\xb0", "7.5\xc2\xb0", "11.25\xc2\xb0", "22.5\xc2\xb0");
  out += line;
  for (const auto& e : result.entries) {
    const MetricsReport& m = e.metrics;
    std::snprintf(line, sizeof(line),
                  "%-8d %-8.2f %-7.4f %-8.2f %-7.4f %-8.2f %-7.4f %-7.3f "
                  "%-7.2f %-7.2f %-7.2f %-7.2f\n",
                  e.light_count, m.albedo.psnr_db, m.albedo.rmse,
                  m.roughness.psnr_db, m.roughness.rmse, m.metallic.psnr_db,
                  m.metallic.rmse, m.normal.mean_deg, m.normal.accuracy[1],
                  m.normal.accuracy[2], m.normal.accuracy[3],
                  m.normal.accuracy[4]);
    out += line;
  }
  return out;
}

}  // namespace multilight
