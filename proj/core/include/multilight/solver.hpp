// Copyright 2026 The Multilight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "multilight/camera.hpp"
#include "multilight/gbuffer.hpp"
#include "multilight/image.hpp"
#include "multilight/light_rig.hpp"

namespace multilight {

/// Tuning for the per-pixel nonlinear least-squares refinement.
struct SolverConfig {
  int max_iterations = 100;
  double initial_damping = 1e-3;
  double damping_down = 0.5;
  double damping_up = 4.0;
  double max_damping = 1e8;         // past this the solve stalls out
  double rel_decrease_tol = 1e-8;   // relative residual decrease
  double step_norm_tol = 1e-10;
  enum class RobustLoss { None, Huber };
  RobustLoss robust_loss = RobustLoss::None;
  double huber_delta = 0.1;
  double roughness_prior_weight = 1e-3;  // weak pull toward 0.5
  double roughness_prior_target = 0.5;
  double fd_step = 1e-4;  // central-difference step
  double shadow_threshold = 1e-4;
  /// Observations at or above this level are treated as clipped and
  /// dropped (set to ~0.999 when solving from quantized files).
  double saturation_level = std::numeric_limits<double>::infinity();
};

/// One light observation for a single pixel, in camera space.
struct PixelObservation {
  Vec3 color;      // observed radiance
  Vec3 light_dir;  // unit, surface -> light
  double light_dist = 1.0;
};

/// Per-pixel solve result.
struct PixelEstimate {
  Vec3 normal{0.0, 0.0, 1.0};
  Vec3 albedo{0.0, 0.0, 0.0};
  double roughness = 0.5;
  double metallic = 0.1;
  double residual_rms = 0.0;  // raw (non-robust) RMS over data residuals
  int iterations = 0;
  int damping_escalations = 0;
  bool converged = false;
};

/// Aggregate convergence statistics for one G-buffer solve.
struct SolverReport {
  int64_t foreground_pixels = 0;
  int64_t converged_pixels = 0;
  int64_t invalid_pixels = 0;  // photometric-stereo failures
  int64_t refined_pixels = 0;
  double mean_iterations = 0.0;
  double mean_residual_rms = 0.0;
  double wall_seconds = 0.0;
};

/// Residual model for one pixel: 3 residual rows per usable light plus a
/// roughness prior row. Parameters (7): two tangent-plane normal
/// increments about a base normal, absolute albedo RGB, and logits of
/// roughness and metallic. Exposed so tests can probe the Jacobian.
class PixelResidualModel {
 public:
  static constexpr int kParamCount = 7;

  PixelResidualModel(std::vector<PixelObservation> observations,
                     const Vec3& view_dir, const Vec3& light_intensity,
                     const SolverConfig& cfg);

  int residual_count() const { return int(observations_.size()) * 3 + 1; }
  const std::vector<PixelObservation>& observations() const {
    return observations_;
  }

  /// Rebuilds the tangent frame; increments p[0], p[1] are measured
  /// from this normal.
  void set_base_normal(const Vec3& n);
  const Vec3& base_normal() const { return base_normal_; }

  /// Unit normal for parameter vector p.
  Vec3 normal_at(const double* p) const;

  /// Fills `out` (residual_count values). Robust weighting per
  /// cfg.robust_loss is folded in as a square-rooted scale so that
  /// ||out||^2 equals the robustified cost.
  void residuals(const double* p, double* out) const;

  /// Central-difference Jacobian, row-major residual_count x 7.
  void jacobian_fd(const double* p, double step, double* jac) const;

  double cost(const double* p) const;

 private:
  std::vector<PixelObservation> observations_;
  Vec3 view_dir_;
  Vec3 light_intensity_;
  SolverConfig cfg_;
  Vec3 base_normal_{0.0, 0.0, 1.0};
  Vec3 tangent_u_, tangent_v_;
};

/// Logistic squash used for the roughness/metallic parameters.
double squash01(double q);
double unsquash01(double value01);

/// One-pixel Woodham solve of M g = b (rows of M are unit light
/// directions). Exposed so tests can check it against hand linear algebra.
struct PsPixelSolve {
  Vec3 g;
  double condition = 0.0;
  bool valid = false;  // >= 3 rows and condition <= 1e6
};
PsPixelSolve ps_solve_pixel(const std::vector<Vec3>& light_dirs,
                            const std::vector<double>& b);

/// Classic Lambertian photometric stereo over the usable observations.
struct PsResult {
  ImagePlane normal;         // 3-channel camera-space unit normals
  ImagePlane pseudo_albedo;  // 1-channel: pi * |g| / E
  ImagePlane albedo_rgb;     // 3-channel initialization albedo
  std::vector<uint8_t> valid;  // row-major, 1 = usable solve
};

/// Per foreground pixel: corrects each observation by its squared light
/// distance, reduces to luminance, discards shadowed (< shadow threshold)
/// and clipped observations, and solves M g = b with rows of M the unit
/// light directions. normal = g/|g|, pseudo_albedo = pi |g| / E. Pixels
/// with fewer than 3 usable observations or condition number > 1e6 are
/// invalid and fall back to normal (0,0,1).
/// `hit_depth` supplies per-pixel surface points; without it rays are
/// intersected with the unit sphere.
PsResult lambertian_ps(const MultiLightSet& mls, const Camera& camera,
                       const LightRig& rig,
                       const ImagePlane* hit_depth = nullptr,
                       const SolverConfig& cfg = {}, int threads = 0);

/// Levenberg-Marquardt refinement of one pixel from `init`.
/// `accepted_costs`, when given, records the cost after each accepted
/// step (a non-increasing sequence by construction).
/// Throws NumericalError("invalid initialization") when the residual at
/// the initial point is not finite.
PixelEstimate refine_pixel(const std::vector<PixelObservation>& observations,
                           const Vec3& view_dir, const Vec3& light_intensity,
                           const PixelEstimate& init, const SolverConfig& cfg,
                           std::vector<double>* accepted_costs = nullptr);

/// Full G-buffer estimation: photometric-stereo initialization
/// (roughness 0.5, metallic 0.1) followed by per-pixel refinement.
/// Invalid pixels keep their initialization with converged = false.
/// Observations are re-ordered canonically by pose before any
/// accumulation, so shuffled (image, pose) pairs produce bit-identical
/// output. Throws NumericalError("underdetermined: no light
/// observations") when the set is empty.
std::pair<GBuffer, SolverReport> solve_gbuffer(
    const ImagePlane& input, const MultiLightSet& mls, const Camera& camera,
    const LightRig& rig, const SolverConfig& cfg = {},
    const ImagePlane* hit_depth = nullptr, int threads = 0);

}  // namespace multilight
