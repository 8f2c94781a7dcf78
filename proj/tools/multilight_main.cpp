// Copyright 2026 The Multilight Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: dataset generation, per-sample solving,
// relighting, evaluation, the light-count ablation and the augmentation
// simulator. Every subcommand is a pure function of (files, flags, seed);
// worker count never changes output bytes.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "multilight/ablation.hpp"
#include "multilight/augment.hpp"
#include "multilight/dataset.hpp"
#include "multilight/envmap.hpp"
#include "multilight/errors.hpp"
#include "multilight/metrics.hpp"
#include "multilight/pfm.hpp"
#include "multilight/png_io.hpp"
#include "multilight/render.hpp"
#include "multilight/solver.hpp"

namespace fs = std::filesystem;
using namespace multilight;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(path + ": cannot open for writing");
  out << text;
  if (!out) throw DataError(path + ": write failed");
}

SolverConfig make_solver_config(const std::string& robust, bool from_files) {
  SolverConfig cfg;
  cfg.robust_loss = robust == "huber" ? SolverConfig::RobustLoss::Huber
                                      : SolverConfig::RobustLoss::None;
  // Quantized files clip at 1.0; drop saturated observations there.
  if (from_files) cfg.saturation_level = 0.999;
  return cfg;
}

int run_gen(const std::string& out_dir, int scenes, int views, int res,
            uint64_t seed, const std::string& split, int threads) {
  DatasetOptions opt;
  opt.num_scenes = scenes;
  opt.views_per_scene = views;
  opt.resolution = res;
  opt.seed = seed;
  opt.split = split;
  opt.threads = threads;
  const DatasetManifest manifest = generate_dataset(opt, out_dir);
  std::fprintf(stderr, "gen: %zu samples -> %s\n", manifest.samples.size(),
               out_dir.c_str());
  return kExitOk;
}

int run_solve(const std::string& sample_dir, const std::vector<int>& lights,
              const std::string& robust, const std::string& out_dir,
              int threads) {
  const ManifestLookup lookup = find_sample_manifest(sample_dir);
  const SampleEntry& entry = lookup.manifest.samples[lookup.entry_index];
  const LoadedSample sample = load_sample(lookup.root, entry);

  MultiLightSet sub;
  sub.input = sample.mls.input;
  sub.alpha = sample.mls.alpha;
  std::vector<int> indices = lights;
  if (indices.empty())
    for (size_t i = 0; i < sample.mls.images.size(); ++i)
      indices.push_back(int(i));
  for (const int li : indices) {
    if (li < 0 || size_t(li) >= sample.mls.images.size())
      throw DataError("solve: light index " + std::to_string(li) +
                      " out of range");
    sub.images.push_back(sample.mls.images[size_t(li)]);
    sub.poses.push_back(sample.mls.poses[size_t(li)]);
  }

  const SolverConfig cfg = make_solver_config(robust, true);
  auto [gb, report] =
      solve_gbuffer(sample.mls.input, sub, entry.camera, entry.rig, cfg,
                    &sample.depth, threads);

  fs::create_directories(out_dir);
  write_gbuffer(gb, out_dir);

  // Keep the report byte-stable: timing goes to stderr, not the file.
  std::string rep;
  rep += "{\n";
  rep += "  \"foreground_pixels\": " + std::to_string(report.foreground_pixels) + ",\n";
  rep += "  \"refined_pixels\": " + std::to_string(report.refined_pixels) + ",\n";
  rep += "  \"converged_pixels\": " + std::to_string(report.converged_pixels) + ",\n";
  rep += "  \"invalid_pixels\": " + std::to_string(report.invalid_pixels) + "\n";
  rep += "}\n";
  write_text_file((fs::path(out_dir) / "solve_report.json").string(), rep);

  // Single-sample manifest so relight/eval can find camera and poses.
  SampleEntry out_entry = entry;
  out_entry.name = fs::path(out_dir).filename().string();
  DatasetManifest single;
  single.seed = entry.scene_seed;
  single.resolution = gb.width();
  SampleFiles f;
  f.input = entry.files.input;
  f.lights = entry.files.lights;
  f.normal = "normal.png";
  f.albedo = "albedo.png";
  f.roughness = "roughness.png";
  f.metallic = "metallic.png";
  f.alpha = "alpha.png";
  f.depth = "depth.pfm";
  out_entry.files = f;
  single.samples.push_back(out_entry);
  write_manifest(single, (fs::path(out_dir) / "manifest.json").string());

  std::fprintf(stderr,
               "solve: %lld foreground, %lld refined, %lld converged, "
               "%lld invalid (%.2fs)\n",
               (long long)report.foreground_pixels,
               (long long)report.refined_pixels,
               (long long)report.converged_pixels,
               (long long)report.invalid_pixels, report.wall_seconds);
  return kExitOk;
}

int run_relight(const std::string& gbuffer_dir, const std::string& env_path,
                int spp, uint64_t seed, const std::string& out_path,
                int threads) {
  const ManifestLookup lookup = find_sample_manifest(gbuffer_dir);
  const SampleEntry& entry = lookup.manifest.samples[lookup.entry_index];
  const GBuffer gb = read_gbuffer(gbuffer_dir);

  EnvironmentMap env;
  env.radiance = read_pfm(env_path);
  env.validate();

  const ImagePlane linear = relight_env(gb, entry.camera, env, spp, seed, threads);
  write_png8(tonemap_srgb(linear), out_path);
  fs::path pfm_path(out_path);
  pfm_path.replace_extension(".pfm");
  write_pfm(linear, pfm_path.string());
  std::fprintf(stderr, "relight: wrote %s and %s\n", out_path.c_str(),
               pfm_path.string().c_str());
  return kExitOk;
}

int run_eval(const std::string& pred_dir, const std::string& gt_dir,
             const std::string& report_path) {
  const GBuffer pred = read_gbuffer(pred_dir);
  const GBuffer gt = read_gbuffer(gt_dir);
  const MetricsReport report = eval_report(pred, gt);
  write_text_file(report_path, metrics_report_to_json(report) + "\n");
  std::fprintf(stderr, "eval: normal mean %.3f deg, albedo RMSE %.4f -> %s\n",
               report.normal.mean_deg, report.albedo.rmse, report_path.c_str());
  return kExitOk;
}

int run_ablate(const std::string& dataset_dir, const std::string& report_path,
               const std::vector<int>& light_counts, const std::string& robust,
               int threads) {
  const DatasetManifest manifest =
      read_manifest((fs::path(dataset_dir) / "manifest.json").string());
  AblationConfig cfg;
  if (!light_counts.empty()) cfg.light_counts = light_counts;
  cfg.solver = make_solver_config(robust, true);
  cfg.threads = threads;
  const AblationResult result = run_ablation(manifest, dataset_dir, cfg);
  write_text_file(report_path, ablation_to_json(result) + "\n");
  std::cout << ablation_table(result);
  return kExitOk;
}

int run_augment(const std::string& sample_dir, uint64_t seed,
                const std::string& out_dir) {
  const ManifestLookup lookup = find_sample_manifest(sample_dir);
  SampleEntry entry = lookup.manifest.samples[lookup.entry_index];
  const LoadedSample sample = load_sample(lookup.root, entry);

  AugmentConfig cfg;
  AugmentTrace trace;
  const MultiLightSet augmented = apply_augmentations(sample.mls, cfg, seed, &trace);

  GBuffer gt;
  bool have_gt = true;
  try {
    gt = read_gbuffer((fs::path(lookup.root) / entry.name).string());
  } catch (const DataError&) {
    have_gt = false;
  }

  entry.rig.poses = augmented.poses;
  entry.name = fs::path(out_dir).filename().string();
  write_sample(augmented, sample.depth, have_gt ? &gt : nullptr, entry,
               fs::path(out_dir).parent_path().string());
  std::fprintf(stderr,
               "augment: degradation=%d intensity=%d orientation=%d "
               "shuffled=%d mixed=%d -> %s\n",
               trace.degradation, trace.intensity, trace.orientation,
               trace.shuffled, trace.mixed, out_dir.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multilight: multi-light inverse-rendering workbench"};
  app.set_config("--config", "", "key=value config file (CLI overrides it)");
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads,
                 "worker threads (0 = hardware); never changes output bytes");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a procedural dataset");
  std::string gen_out;
  int gen_scenes = 40, gen_views = 2, gen_res = 256;
  uint64_t gen_seed = 0;
  std::string gen_split = "train";
  gen->add_option("--out", gen_out, "output directory")->required();
  gen->add_option("--scenes", gen_scenes, "number of scenes");
  gen->add_option("--views", gen_views, "views per scene");
  gen->add_option("--res", gen_res, "image resolution");
  gen->add_option("--seed", gen_seed, "dataset seed");
  gen->add_option("--split", gen_split, "train|test (disjoint scene seeds)")
      ->check(CLI::IsMember({"train", "test"}));

  // solve
  auto* solve = app.add_subcommand("solve", "estimate a G-buffer from a sample");
  std::string solve_sample, solve_out, solve_robust = "none";
  std::vector<int> solve_lights;
  solve->add_option("--sample", solve_sample, "sample directory")->required();
  solve->add_option("--lights", solve_lights,
                    "light indices (default: all)")
      ->delimiter(',');
  solve->add_option("--robust", solve_robust, "none|huber")
      ->check(CLI::IsMember({"none", "huber"}));
  solve->add_option("--out", solve_out, "output directory")->required();

  // relight
  auto* relight = app.add_subcommand("relight", "relight a G-buffer under an environment");
  std::string rel_gbuffer, rel_env, rel_out;
  int rel_spp = 256;
  uint64_t rel_seed = 0;
  relight->add_option("--gbuffer", rel_gbuffer, "G-buffer directory")->required();
  relight->add_option("--env", rel_env, "equirectangular PFM environment")->required();
  relight->add_option("--spp", rel_spp, "samples per pixel");
  relight->add_option("--seed", rel_seed, "sampler seed");
  relight->add_option("--out", rel_out, "output PNG (a PFM is written beside it)")
      ->required();

  // eval
  auto* eval = app.add_subcommand("eval", "compare two G-buffers");
  std::string eval_pred, eval_gt, eval_report_path;
  eval->add_option("--pred", eval_pred, "predicted G-buffer directory")->required();
  eval->add_option("--gt", eval_gt, "ground-truth G-buffer directory")->required();
  eval->add_option("--report", eval_report_path, "JSON report path")->required();

  // ablate
  auto* ablate = app.add_subcommand("ablate", "light-count ablation over a dataset");
  std::string abl_dataset, abl_report, abl_robust = "none";
  std::vector<int> abl_lights;
  ablate->add_option("--dataset", abl_dataset, "dataset directory")->required();
  ablate->add_option("--report", abl_report, "JSON report path")->required();
  ablate->add_option("--light-counts", abl_lights, "subset sizes (default 1,3,6,9)")
      ->delimiter(',');
  ablate->add_option("--robust", abl_robust, "none|huber")
      ->check(CLI::IsMember({"none", "huber"}));

  // augment
  auto* augment = app.add_subcommand("augment", "apply the degradation suite to a sample");
  std::string aug_sample, aug_out;
  uint64_t aug_seed = 0;
  augment->add_option("--sample", aug_sample, "sample directory")->required();
  augment->add_option("--seed", aug_seed, "augmentation seed");
  augment->add_option("--out", aug_out, "output sample directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen->parsed())
      return run_gen(gen_out, gen_scenes, gen_views, gen_res, gen_seed,
                     gen_split, threads);
    if (solve->parsed())
      return run_solve(solve_sample, solve_lights, solve_robust, solve_out,
                       threads);
    if (relight->parsed())
      return run_relight(rel_gbuffer, rel_env, rel_spp, rel_seed, rel_out,
                         threads);
    if (eval->parsed()) return run_eval(eval_pred, eval_gt, eval_report_path);
    if (ablate->parsed())
      return run_ablate(abl_dataset, abl_report, abl_lights, abl_robust,
                        threads);
    if (augment->parsed()) return run_augment(aug_sample, aug_seed, aug_out);
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
