// Copyright 2026 The Multilight Authors
// SPDX-License-Identifier: Apache-2.0

#include "multilight/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "multilight/brdf.hpp"
#include "multilight/errors.hpp"
#include "multilight/parallel.hpp"

namespace multilight {

namespace {

inline double luminance(const Vec3& c) { return (c.x + c.y + c.z) / 3.0; }

/// Ray-sphere fallback when no hit-depth plane is available: intersect
/// with the unit sphere, or take the closest approach on a miss.
double approx_depth(const Vec3& origin, const Vec3& dir) {
  const double od = dot(origin, dir);
  const double disc = od * od - (length_squared(origin) - 1.0);
  if (disc >= 0.0) return -od - std::sqrt(disc);
  return -od;
}

}  // namespace

double squash01(double q) {
  if (q >= 0.0) return 1.0 / (1.0 + std::exp(-q));
  const double e = std::exp(q);
  return e / (1.0 + e);
}

double unsquash01(double v) {
  v = clamp(v, 1e-6, 1.0 - 1e-6);
  return std::log(v / (1.0 - v));
}

// ---------------------------------------------------------------------------
// PixelResidualModel

PixelResidualModel::PixelResidualModel(std::vector<PixelObservation> observations,
                                       const Vec3& view_dir,
                                       const Vec3& light_intensity,
                                       const SolverConfig& cfg)
    : observations_(std::move(observations)),
      view_dir_(view_dir),
      light_intensity_(light_intensity),
      cfg_(cfg) {
  set_base_normal(Vec3(0.0, 0.0, 1.0));
}

void PixelResidualModel::set_base_normal(const Vec3& n) {
  base_normal_ = normalize(n);
  orthonormal_basis(base_normal_, tangent_u_, tangent_v_);
}

Vec3 PixelResidualModel::normal_at(const double* p) const {
  return normalize(base_normal_ + tangent_u_ * p[0] + tangent_v_ * p[1]);
}

void PixelResidualModel::residuals(const double* p, double* out) const {
  const Vec3 n = normal_at(p);
  MaterialSample mat;
  mat.albedo = {p[2], p[3], p[4]};
  mat.roughness = squash01(p[5]);
  mat.metallic = squash01(p[6]);

  const double delta = cfg_.huber_delta;
  const bool huber = cfg_.robust_loss == SolverConfig::RobustLoss::Huber;

  for (size_t i = 0; i < observations_.size(); ++i) {
    const PixelObservation& ob = observations_[i];
    const Vec3 pred = shade_point_dir(n, view_dir_, mat, ob.light_dir,
                                      ob.light_dist, light_intensity_);
    Vec3 e = pred - ob.color;
    if (huber) {
      const double en = length(e);
      // Square-rooted Huber on the block norm: ||scaled e||^2 = rho(en)
      // with rho(e) = e^2 below delta, delta (2e - delta) above.
      if (en > delta) e *= std::sqrt(delta * (2.0 * en - delta)) / en;
    }
    out[3 * i + 0] = e.x;
    out[3 * i + 1] = e.y;
    out[3 * i + 2] = e.z;
  }
  out[3 * observations_.size()] =
      std::sqrt(cfg_.roughness_prior_weight) *
      (mat.roughness - cfg_.roughness_prior_target);
}

void PixelResidualModel::jacobian_fd(const double* p, double step,
                                     double* jac) const {
  const int m = residual_count();
  std::vector<double> plus(size_t(m)), minus(size_t(m));
  double q[kParamCount];
  for (int k = 0; k < kParamCount; ++k) {
    std::copy(p, p + kParamCount, q);
    q[k] = p[k] + step;
    residuals(q, plus.data());
    q[k] = p[k] - step;
    residuals(q, minus.data());
    const double inv = 1.0 / (2.0 * step);
    for (int r = 0; r < m; ++r) jac[size_t(r) * kParamCount + k] = (plus[r] - minus[r]) * inv;
  }
}

double PixelResidualModel::cost(const double* p) const {
  std::vector<double> r(size_t(residual_count()));
  residuals(p, r.data());
  double c = 0.0;
  for (const double v : r) c += v * v;
  return c;
}

namespace {

/// Raw (non-robust) residual RMS over the data rows.
double raw_rms(const PixelResidualModel& model, const double* p,
               const Vec3& view_dir, const Vec3& intensity) {
  const auto& obs = model.observations();
  if (obs.empty()) return 0.0;
  const Vec3 n = model.normal_at(p);
  MaterialSample mat;
  mat.albedo = {p[2], p[3], p[4]};
  mat.roughness = squash01(p[5]);
  mat.metallic = squash01(p[6]);
  double sum = 0.0;
  for (const auto& ob : obs) {
    const Vec3 pred =
        shade_point_dir(n, view_dir, mat, ob.light_dir, ob.light_dist, intensity);
    sum += length_squared(pred - ob.color);
  }
  return std::sqrt(sum / (3.0 * double(obs.size())));
}

}  // namespace

// ---------------------------------------------------------------------------
// Levenberg-Marquardt refinement

PixelEstimate refine_pixel(const std::vector<PixelObservation>& observations,
                           const Vec3& view_dir, const Vec3& light_intensity,
                           const PixelEstimate& init, const SolverConfig& cfg,
                           std::vector<double>* accepted_costs) {
  PixelEstimate est = init;
  est.normal = normalize(init.normal);
  est.iterations = 0;
  est.damping_escalations = 0;
  est.converged = false;

  double max_lum = 0.0;
  for (const auto& ob : observations)
    max_lum = std::max(max_lum, luminance(ob.color));
  if (observations.empty() || max_lum < cfg.shadow_threshold) {
    // Fully shadowed pixel: nothing to fit, stay at the initialization.
    return est;
  }

  PixelResidualModel model(observations, view_dir, light_intensity, cfg);
  model.set_base_normal(est.normal);

  constexpr int np = PixelResidualModel::kParamCount;
  double p[np] = {0.0,
                  0.0,
                  init.albedo.x,
                  init.albedo.y,
                  init.albedo.z,
                  unsquash01(init.roughness),
                  unsquash01(init.metallic)};

  const int m = model.residual_count();
  std::vector<double> r(size_t(m)), r_trial(size_t(m));
  model.residuals(p, r.data());
  double cost = 0.0;
  for (const double v : r) cost += v * v;
  if (!std::isfinite(cost)) throw NumericalError("invalid initialization");

  double damping = cfg.initial_damping;
  bool stalled = false;
  if (cost <= 1e-24) est.converged = true;

  Eigen::Matrix<double, Eigen::Dynamic, np, Eigen::RowMajor> jac(m, np);
  Eigen::Matrix<double, np, np> jtj;
  Eigen::Matrix<double, np, 1> jtr, delta;

  while (!est.converged && !stalled && est.iterations < cfg.max_iterations) {
    model.jacobian_fd(p, cfg.fd_step, jac.data());
    Eigen::Map<const Eigen::VectorXd> rv(r.data(), m);
    jtj = jac.transpose() * jac;
    jtr = jac.transpose() * rv;

    for (;;) {
      Eigen::Matrix<double, np, np> damped = jtj;
      for (int k = 0; k < np; ++k)
        damped(k, k) += damping * std::max(jtj(k, k), 1e-12);
      delta = damped.ldlt().solve(-jtr);

      double trial[np];
      for (int k = 0; k < np; ++k) trial[k] = p[k] + delta[k];
      model.residuals(trial, r_trial.data());
      double trial_cost = 0.0;
      for (const double v : r_trial) trial_cost += v * v;

      if (std::isfinite(trial_cost) && trial_cost < cost) {
        // Fold the tangent increments into the base normal and reset them.
        model.set_base_normal(model.normal_at(trial));
        p[0] = 0.0;
        p[1] = 0.0;
        for (int k = 2; k < np; ++k) p[k] = trial[k];
        const double rel_decrease = (cost - trial_cost) / cost;
        const double step_norm = delta.norm();
        r.swap(r_trial);
        cost = trial_cost;
        if (accepted_costs) accepted_costs->push_back(cost);
        ++est.iterations;
        damping = std::max(damping * cfg.damping_down, 1e-12);
        if (rel_decrease < cfg.rel_decrease_tol ||
            step_norm < cfg.step_norm_tol || cost <= 1e-24)
          est.converged = true;
        break;
      }
      damping *= cfg.damping_up;
      ++est.damping_escalations;
      if (damping > cfg.max_damping) {
        stalled = true;
        break;
      }
    }
  }

  est.normal = model.base_normal();
  est.albedo = clamp01({p[2], p[3], p[4]});
  est.roughness = squash01(p[5]);
  est.metallic = squash01(p[6]);
  est.residual_rms = raw_rms(model, p, view_dir, light_intensity);
  return est;
}

// ---------------------------------------------------------------------------
// Photometric stereo

PsPixelSolve ps_solve_pixel(const std::vector<Vec3>& light_dirs,
                            const std::vector<double>& b) {
  PsPixelSolve out;
  out.g = Vec3(0.0);
  out.condition = std::numeric_limits<double>::infinity();
  out.valid = false;
  if (light_dirs.size() < 3 || light_dirs.size() != b.size()) return out;

  Eigen::MatrixXd mat(light_dirs.size(), 3);
  Eigen::VectorXd rhs(light_dirs.size());
  for (size_t i = 0; i < light_dirs.size(); ++i) {
    mat(Eigen::Index(i), 0) = light_dirs[i].x;
    mat(Eigen::Index(i), 1) = light_dirs[i].y;
    mat(Eigen::Index(i), 2) = light_dirs[i].z;
    rhs(Eigen::Index(i)) = b[i];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(mat,
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(2) <= 0.0) return out;
  out.condition = sv(0) / sv(2);
  if (out.condition > 1e6) return out;
  const Eigen::Vector3d g = svd.solve(rhs);
  out.g = {g(0), g(1), g(2)};
  out.valid = length(out.g) > 0.0;
  return out;
}

PsResult lambertian_ps(const MultiLightSet& mls, const Camera& camera,
                       const LightRig& rig, const ImagePlane* hit_depth,
                       const SolverConfig& cfg, int threads) {
  camera.validate();
  const int w = mls.input.width(), h = mls.input.height();
  const size_t nlights = mls.images.size();

  PsResult res;
  res.normal = ImagePlane(w, h, 3);
  res.pseudo_albedo = ImagePlane(w, h, 1);
  res.albedo_rgb = ImagePlane(w, h, 3);
  res.valid.assign(size_t(w) * h, 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) res.normal.set_rgb(x, y, {0.0, 0.0, 1.0});

  std::vector<Vec3> light_pos(nlights);
  for (size_t i = 0; i < nlights; ++i)
    light_pos[i] = light_position(mls.poses[i], rig.radius, camera);
  const double e_lum = luminance(rig.intensity);

  parallel_for(h, threads, [&](int64_t y) {
    std::vector<Vec3> dirs;
    std::vector<double> b;
    std::vector<Vec3> colors;
    std::vector<double> dists;
    for (int x = 0; x < w; ++x) {
      if (!mls.alpha.empty() && mls.alpha.at(x, int(y)) <= 0.5f) continue;
      const Vec3 dir = camera.ray_direction(x, int(y));
      double t = hit_depth ? double(hit_depth->at(x, int(y))) : 0.0;
      if (t <= 0.0) t = approx_depth(camera.position, dir);
      const Vec3 point = camera.position + dir * t;

      dirs.clear();
      b.clear();
      colors.clear();
      dists.clear();
      for (size_t i = 0; i < nlights; ++i) {
        const Vec3 to_light = light_pos[i] - point;
        const double dist = length(to_light);
        const Vec3 obs = mls.images[i].rgb(x, int(y));
        const double corrected = luminance(obs) * dist * dist;
        if (corrected < cfg.shadow_threshold) continue;
        if (std::max(obs.x, std::max(obs.y, obs.z)) >= cfg.saturation_level)
          continue;
        dirs.push_back(camera.to_camera(to_light / dist));
        b.push_back(corrected);
        colors.push_back(obs);
        dists.push_back(dist);
      }

      Vec3 n{0.0, 0.0, 1.0};
      const PsPixelSolve solve = ps_solve_pixel(dirs, b);
      if (solve.valid) {
        n = normalize(solve.g);
        if (n.z < 0.0) {
          // Storage contract: camera-space normals stay front-facing.
          n.z = 0.0;
          const double len = length(n);
          n = len > 1e-12 ? n / len : Vec3(0.0, 0.0, 1.0);
        }
        res.valid[size_t(y) * w + x] = 1;
        res.normal.set_rgb(x, int(y), n);
        res.pseudo_albedo.at(x, int(y)) =
            e_lum > 0.0 ? float(kPi * length(solve.g) / e_lum) : 0.0f;
      }

      // Per-channel albedo initialization: project corrected observations
      // onto the Lambertian shading profile of the recovered normal.
      double denom = 0.0;
      Vec3 num(0.0);
      for (size_t i = 0; i < dirs.size(); ++i) {
        const double ndl = std::max(dot(n, dirs[i]), 0.0);
        denom += ndl * ndl;
        num += colors[i] * (dists[i] * dists[i] * ndl);
      }
      if (denom > 1e-12) {
        Vec3 rho = num * (kPi / denom);
        rho = {rig.intensity.x > 0.0 ? rho.x / rig.intensity.x : 0.0,
               rig.intensity.y > 0.0 ? rho.y / rig.intensity.y : 0.0,
               rig.intensity.z > 0.0 ? rho.z / rig.intensity.z : 0.0};
        res.albedo_rgb.set_rgb(x, int(y), clamp01(rho));
      }
    }
  });
  return res;
}

// ---------------------------------------------------------------------------
// Full G-buffer solve

std::pair<GBuffer, SolverReport> solve_gbuffer(
    const ImagePlane& input, const MultiLightSet& mls, const Camera& camera,
    const LightRig& rig, const SolverConfig& cfg, const ImagePlane* hit_depth,
    int threads) {
  const auto t_start = std::chrono::steady_clock::now();
  if (mls.images.empty())
    throw NumericalError("underdetermined: no light observations");
  mls.validate();
  camera.validate();
  if (input.width() != mls.input.width() || input.height() != mls.input.height())
    throw DataError("solve_gbuffer: input dimensions disagree with light images");

  // Canonical observation order: solve results must be bit-identical
  // under any shuffle of the (image, pose) pairs.
  std::vector<size_t> order(mls.images.size());
  std::iota(order.begin(), order.end(), size_t(0));
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (mls.poses[a].theta != mls.poses[b].theta)
      return mls.poses[a].theta < mls.poses[b].theta;
    return mls.poses[a].phi < mls.poses[b].phi;
  });
  MultiLightSet canon;
  canon.input = mls.input;
  canon.alpha = mls.alpha;
  canon.images.reserve(order.size());
  canon.poses.reserve(order.size());
  for (const size_t i : order) {
    canon.images.push_back(mls.images[i]);
    canon.poses.push_back(mls.poses[i]);
  }

  const int w = input.width(), h = input.height();
  const size_t nlights = canon.images.size();
  const bool can_refine = nlights >= 3;

  const PsResult ps = lambertian_ps(canon, camera, rig, hit_depth, cfg, threads);

  std::vector<Vec3> light_pos(nlights);
  for (size_t i = 0; i < nlights; ++i)
    light_pos[i] = light_position(canon.poses[i], rig.radius, camera);

  GBuffer gb(w, h);
  struct RowStats {
    int64_t foreground = 0, converged = 0, invalid = 0, refined = 0;
    double iter_sum = 0.0, rms_sum = 0.0;
  };
  std::vector<RowStats> row_stats(size_t(h));

  parallel_for(h, threads, [&](int64_t y) {
    RowStats& stats = row_stats[size_t(y)];
    std::vector<PixelObservation> obs;
    for (int x = 0; x < w; ++x) {
      const bool fg = canon.alpha.empty() || canon.alpha.at(x, int(y)) > 0.5f;
      if (!fg) continue;
      ++stats.foreground;

      const Vec3 dir = camera.ray_direction(x, int(y));
      double t = hit_depth ? double(hit_depth->at(x, int(y))) : 0.0;
      if (t <= 0.0) t = approx_depth(camera.position, dir);
      const Vec3 point = camera.position + dir * t;
      const Vec3 view_cam = camera.to_camera(normalize(camera.position - point));

      obs.clear();
      double lum_sum = 0.0;
      for (size_t i = 0; i < nlights; ++i) {
        const Vec3 to_light = light_pos[i] - point;
        const double dist = length(to_light);
        const Vec3 color = canon.images[i].rgb(x, int(y));
        const double corrected = luminance(color) * dist * dist;
        if (corrected < cfg.shadow_threshold) continue;
        if (std::max(color.x, std::max(color.y, color.z)) >= cfg.saturation_level)
          continue;
        obs.push_back({color, camera.to_camera(to_light / dist), dist});
        lum_sum += luminance(color);
      }

      PixelEstimate init;
      init.normal = ps.normal.rgb(x, int(y));
      init.albedo = ps.albedo_rgb.rgb(x, int(y));
      init.roughness = 0.5;
      init.metallic = 0.1;

      PixelEstimate best = init;
      const bool ps_valid = ps.valid[size_t(y) * w + x] != 0;
      if (ps_valid && can_refine && obs.size() >= 3) {
        ++stats.refined;
        best = refine_pixel(obs, view_cam, rig.intensity, init, cfg);

        // Specular-dominant pixels can defeat the Lambertian start; retry
        // from a mirror-direction initialization and keep the better fit.
        const double mean_lum = lum_sum / double(obs.size());
        if (best.residual_rms > std::max(5e-4, 0.02 * mean_lum)) {
          size_t brightest = 0;
          double bright_lum = -1.0;
          Vec3 mean_color(0.0);
          double mean_weight = 0.0;
          for (size_t i = 0; i < obs.size(); ++i) {
            const double l = luminance(obs[i].color) * obs[i].light_dist *
                             obs[i].light_dist;
            if (l > bright_lum) {
              bright_lum = l;
              brightest = i;
            }
            mean_color += obs[i].color * (obs[i].light_dist * obs[i].light_dist);
            mean_weight += 1.0;
          }
          mean_color = clamp01(mean_color / mean_weight);
          for (const double rough0 : {0.2, 0.6}) {
            PixelEstimate glossy = init;
            glossy.normal = normalize(obs[brightest].light_dir + view_cam);
            glossy.albedo = mean_color;
            glossy.roughness = rough0;
            glossy.metallic = 0.9;
            const PixelEstimate cand =
                refine_pixel(obs, view_cam, rig.intensity, glossy, cfg);
            if (cand.residual_rms < best.residual_rms) best = cand;
          }
        }
        if (best.converged) ++stats.converged;
        stats.iter_sum += best.iterations;
        stats.rms_sum += best.residual_rms;
      } else {
        ++stats.invalid;
        best.converged = false;
      }

      Vec3 n = best.normal;
      if (n.z < 0.0) {
        n.z = 0.0;
        const double len = length(n);
        n = len > 1e-12 ? n / len : Vec3(0.0, 0.0, 1.0);
      }
      gb.normal.set_rgb(x, int(y), n);
      gb.albedo.set_rgb(x, int(y), clamp01(best.albedo));
      gb.roughness.at(x, int(y)) = float(clamp(best.roughness, 0.0, 1.0));
      gb.metallic.at(x, int(y)) = float(clamp(best.metallic, 0.0, 1.0));
      gb.alpha.at(x, int(y)) = 1.0f;
      gb.depth.at(x, int(y)) = float(t);
    }
  });

  SolverReport report;
  for (const RowStats& s : row_stats) {
    report.foreground_pixels += s.foreground;
    report.converged_pixels += s.converged;
    report.invalid_pixels += s.invalid;
    report.refined_pixels += s.refined;
    report.mean_iterations += s.iter_sum;
    report.mean_residual_rms += s.rms_sum;
  }
  if (report.refined_pixels > 0) {
    report.mean_iterations /= double(report.refined_pixels);
    report.mean_residual_rms /= double(report.refined_pixels);
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return {std::move(gb), report};
}

}  // namespace multilight
