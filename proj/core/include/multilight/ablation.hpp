// Copyright 2026 The Multilight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "multilight/dataset.hpp"
#include "multilight/metrics.hpp"
#include "multilight/solver.hpp"

namespace multilight {

/// Light-index subset used for an L-image solve. Azimuths of the smaller
/// subsets spread evenly to keep the light matrix well conditioned;
/// L = 1 uses the at-camera light alone (the ambiguity demonstration).
///   1 -> {8}, 3 -> {0, 3, 6}, 6 -> {0, 1, 3, 4, 6, 7}, 9 -> all.
std::vector<int> ablation_subset(int light_count);

struct AblationConfig {
  std::vector<int> light_counts = {1, 3, 6, 9};
  SolverConfig solver;
  int threads = 0;
};

struct AblationEntry {
  int light_count = 0;
  std::vector<int> subset;
  MetricsReport metrics;  // per-sample reports averaged over the set
};

struct AblationResult {
  std::vector<AblationEntry> entries;
  size_t sample_count = 0;
};

/// Solves every manifest sample with each light subset and aggregates a
/// MetricsReport per L. Deterministic for any thread count.
/// Throws DataError when a subset index exceeds the available lights.
AblationResult run_ablation(const DatasetManifest& manifest,
                            const std::string& root,
                            const AblationConfig& cfg = {});

/// JSON report (timing-free, byte-stable across runs).
std::string ablation_to_json(const AblationResult& result);

/// Plain-text table: one row per light count with albedo / roughness /
/// metallic PSNR+RMSE and normal MAE plus threshold accuracies.
std::string ablation_table(const AblationResult& result);

}  // namespace multilight
