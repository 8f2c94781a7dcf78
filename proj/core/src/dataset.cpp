// Copyright 2026 The Multilight Authors
// SPDX-License-Identifier: Apache-2.0

#include "multilight/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "multilight/envmap.hpp"
#include "multilight/errors.hpp"
#include "multilight/parallel.hpp"
#include "multilight/pfm.hpp"
#include "multilight/png_io.hpp"
#include "multilight/render.hpp"
#include "multilight/rng.hpp"

namespace fs = std::filesystem;

namespace multilight {

// ---------------------------------------------------------------------------
// Scene generation

namespace {

/// Sequential draws from one seeded counter stream.
struct Draws {
  uint64_t seed;
  uint64_t counter = 0;
  double uniform(double lo = 0.0, double hi = 1.0) {
    return rng_uniform(seed, kStreamSceneGen, counter++, 0, lo, hi);
  }
  int pick(int n) { return std::min(n - 1, int(uniform() * n)); }
};

constexpr double kRoughLevels[3] = {0.2, 0.5, 0.8};

FieldSpec draw_albedo_field(Draws& d) {
  FieldSpec f;
  auto color = [&d] {
    return Vec3{d.uniform(0.05, 0.95), d.uniform(0.05, 0.95),
                d.uniform(0.05, 0.95)};
  };
  const int kind = d.pick(3);
  f.value_a = color();
  f.value_b = color();
  f.scale = d.uniform(1.5, 4.0);
  f.noise_seed = uint64_t(d.uniform() * double(1ull << 32));
  f.kind = kind == 0 ? FieldSpec::Kind::Constant
                     : (kind == 1 ? FieldSpec::Kind::Checker
                                  : FieldSpec::Kind::ValueNoise);
  return f;
}

FieldSpec draw_roughness_field(Draws& d) {
  FieldSpec f;
  f.value_a = Vec3(kRoughLevels[d.pick(3)]);
  f.value_b = Vec3(kRoughLevels[d.pick(3)]);
  f.scale = d.uniform(1.5, 3.0);
  f.kind = d.uniform() < 0.6 ? FieldSpec::Kind::Constant : FieldSpec::Kind::Checker;
  return f;
}

FieldSpec draw_metallic_field(Draws& d) {
  FieldSpec f;
  f.value_a = Vec3(d.uniform() < 0.5 ? 0.0 : 1.0);
  f.value_b = Vec3(d.uniform() < 0.5 ? 0.0 : 1.0);
  f.scale = d.uniform(1.0, 2.5);
  f.kind = d.uniform() < 0.6 ? FieldSpec::Kind::Constant : FieldSpec::Kind::Checker;
  return f;
}

}  // namespace

Scene generate_scene(uint64_t seed) {
  Draws d{seed};
  Scene scene;
  const int count = 1 + d.pick(3);
  for (int k = 0; k < count; ++k) {
    Primitive prim;
    const int kind = d.pick(5);
    prim.kind = Primitive::Kind(kind);
    // Single primitives sit large at the origin; groups spread out.
    const double size = count == 1 ? d.uniform(0.8, 1.2) : d.uniform(0.45, 0.7);
    switch (prim.kind) {
      case Primitive::Kind::Sphere:
        prim.radius = size;
        break;
      case Primitive::Kind::RoundedBox:
        prim.half_extents = {size * d.uniform(0.5, 0.9), size * d.uniform(0.5, 0.9),
                             size * d.uniform(0.5, 0.9)};
        prim.rounding = size * d.uniform(0.05, 0.25);
        break;
      case Primitive::Kind::Torus:
        prim.major_radius = size * 0.72;
        prim.minor_radius = size * d.uniform(0.18, 0.3);
        break;
      case Primitive::Kind::Capsule:
        prim.radius = size * d.uniform(0.3, 0.45);
        prim.half_length = size * d.uniform(0.45, 0.7);
        break;
      case Primitive::Kind::DisplacedSphere:
        prim.radius = size * 0.9;
        prim.disp_amplitude = size * d.uniform(0.04, 0.1);
        prim.disp_frequency = d.uniform(4.0, 8.0);
        break;
    }
    if (count > 1) {
      const double az = d.uniform(0.0, kTwoPi);
      const double el = d.uniform(-0.6, 0.6);
      const double dist = d.uniform(0.3, 0.7);
      prim.center = {dist * std::cos(el) * std::cos(az), dist * std::sin(el),
                     dist * std::cos(el) * std::sin(az)};
    }
    const Vec3 axis{d.uniform(-1.0, 1.0), d.uniform(-1.0, 1.0),
                    d.uniform(-1.0, 1.0)};
    if (length(axis) > 1e-6)
      set_rotation(prim, axis, d.uniform(0.0, kTwoPi));
    prim.albedo_field = draw_albedo_field(d);
    prim.roughness_field = draw_roughness_field(d);
    prim.metallic_field = draw_metallic_field(d);
    scene.primitives.push_back(prim);
  }
  // Shrink into the bounding sphere if a draw landed outside.
  const double bound = scene.bounding_radius();
  if (bound > 1.5) {
    const double shrink = 1.5 / bound;
    for (auto& prim : scene.primitives) {
      prim.center *= shrink;
      prim.radius *= shrink;
      prim.half_extents *= shrink;
      prim.rounding *= shrink;
      prim.major_radius *= shrink;
      prim.minor_radius *= shrink;
      prim.half_length *= shrink;
      prim.disp_amplitude *= shrink;
    }
  }
  scene.validate();
  return scene;
}

uint64_t scene_seed_for(uint64_t dataset_seed, const std::string& split,
                        int scene_index) {
  const uint64_t split_offset = split == "test" ? 0x80000000ull : 0ull;
  return dataset_seed * 0x100000000ull + split_offset + uint64_t(scene_index);
}

// ---------------------------------------------------------------------------
// G-buffer and manifest I/O

namespace {

ImagePlane encode_normal_plane(const ImagePlane& normal,
                               const ImagePlane& alpha) {
  ImagePlane out(normal.width(), normal.height(), 3);
  for (int y = 0; y < normal.height(); ++y)
    for (int x = 0; x < normal.width(); ++x)
      if (alpha.at(x, y) > 0.5f)
        out.set_rgb(x, y, encode_normal(normal.rgb(x, y)));
  return out;
}

}  // namespace

void write_gbuffer(const GBuffer& gb, const std::string& dir) {
  fs::create_directories(dir);
  const fs::path base(dir);
  write_png16(encode_normal_plane(gb.normal, gb.alpha), (base / "normal.png").string());
  write_png16(gb.albedo, (base / "albedo.png").string());
  write_png16(gb.roughness, (base / "roughness.png").string());
  write_png16(gb.metallic, (base / "metallic.png").string());
  write_png16(gb.alpha, (base / "alpha.png").string());
  write_pfm(gb.depth, (base / "depth.pfm").string());
}

GBuffer read_gbuffer(const std::string& dir) {
  const fs::path base(dir);
  const char* names[] = {"normal.png",   "albedo.png", "roughness.png",
                         "metallic.png", "alpha.png",  "depth.pfm"};
  std::string missing;
  for (const char* name : names) {
    if (!fs::exists(base / name)) {
      if (!missing.empty()) missing += ", ";
      missing += name;
    }
  }
  if (!missing.empty())
    throw DataError(dir + ": missing G-buffer maps: " + missing);

  GBuffer gb;
  const ImagePlane normal_enc = read_png((base / "normal.png").string());
  gb.albedo = read_png((base / "albedo.png").string());
  gb.roughness = read_png((base / "roughness.png").string());
  gb.metallic = read_png((base / "metallic.png").string());
  gb.alpha = read_png((base / "alpha.png").string());
  gb.depth = read_pfm((base / "depth.pfm").string());

  // Re-binarize alpha, then decode normals on foreground pixels only.
  for (int y = 0; y < gb.alpha.height(); ++y)
    for (int x = 0; x < gb.alpha.width(); ++x)
      gb.alpha.at(x, y) = gb.alpha.at(x, y) > 0.5f ? 1.0f : 0.0f;

  gb.normal = ImagePlane(normal_enc.width(), normal_enc.height(), 3);
  for (int y = 0; y < normal_enc.height(); ++y) {
    for (int x = 0; x < normal_enc.width(); ++x) {
      if (gb.alpha.at(x, y) > 0.5f) {
        Vec3 n = decode_normal(normal_enc.rgb(x, y));
        if (n.z < 0.0) {
          n.z = 0.0;
          const double len = length(n);
          n = len > 1e-12 ? n / len : Vec3(0.0, 0.0, 1.0);
        }
        gb.normal.set_rgb(x, y, n);
      }
    }
  }
  return gb;
}

namespace {

nlohmann::json vec3_json(const Vec3& v) {
  return nlohmann::json::array({v.x, v.y, v.z});
}

Vec3 vec3_from_json(const nlohmann::json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

nlohmann::json entry_json(const SampleEntry& e) {
  nlohmann::json poses = nlohmann::json::array();
  for (const auto& p : e.rig.poses)
    poses.push_back({{"theta", p.theta}, {"phi", p.phi}});
  return {
      {"name", e.name},
      {"scene_seed", e.scene_seed},
      {"view_index", e.view_index},
      {"camera",
       {{"position", vec3_json(e.camera.position)},
        {"look_at", vec3_json(e.camera.look_at)},
        {"up", vec3_json(e.camera.up)},
        {"vfov", e.camera.vfov},
        {"width", e.camera.width},
        {"height", e.camera.height}}},
      {"rig",
       {{"radius", e.rig.radius},
        {"intensity", vec3_json(e.rig.intensity)},
        {"poses", poses}}},
      {"files",
       {{"input", e.files.input},
        {"lights", e.files.lights},
        {"normal", e.files.normal},
        {"albedo", e.files.albedo},
        {"roughness", e.files.roughness},
        {"metallic", e.files.metallic},
        {"alpha", e.files.alpha},
        {"depth", e.files.depth}}}};
}

SampleEntry entry_from_json(const nlohmann::json& j) {
  SampleEntry e;
  e.name = j.at("name").get<std::string>();
  e.scene_seed = j.at("scene_seed").get<uint64_t>();
  e.view_index = j.at("view_index").get<int>();
  const auto& cam = j.at("camera");
  e.camera.position = vec3_from_json(cam.at("position"));
  e.camera.look_at = vec3_from_json(cam.at("look_at"));
  e.camera.up = vec3_from_json(cam.at("up"));
  e.camera.vfov = cam.at("vfov").get<double>();
  e.camera.width = cam.at("width").get<int>();
  e.camera.height = cam.at("height").get<int>();
  const auto& rig = j.at("rig");
  e.rig.radius = rig.at("radius").get<double>();
  e.rig.intensity = vec3_from_json(rig.at("intensity"));
  for (const auto& p : rig.at("poses"))
    e.rig.poses.push_back(
        {p.at("theta").get<double>(), p.at("phi").get<double>()});
  const auto& f = j.at("files");
  e.files.input = f.at("input").get<std::string>();
  e.files.lights = f.at("lights").get<std::vector<std::string>>();
  e.files.normal = f.at("normal").get<std::string>();
  e.files.albedo = f.at("albedo").get<std::string>();
  e.files.roughness = f.at("roughness").get<std::string>();
  e.files.metallic = f.at("metallic").get<std::string>();
  e.files.alpha = f.at("alpha").get<std::string>();
  e.files.depth = f.at("depth").get<std::string>();
  return e;
}

}  // namespace

void write_manifest(const DatasetManifest& manifest, const std::string& path) {
  nlohmann::json j;
  j["version"] = manifest.version;
  j["seed"] = manifest.seed;
  j["resolution"] = manifest.resolution;
  j["split"] = manifest.split;
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& e : manifest.samples) samples.push_back(entry_json(e));
  j["samples"] = samples;

  // No partial manifests: write beside the target, then rename over it.
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw DataError(tmp + ": cannot open for writing");
    out << j.dump(2) << "\n";
    if (!out) throw DataError(tmp + ": write failed");
  }
  fs::rename(tmp, path);
}

DatasetManifest read_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path + ": cannot open");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": manifest parse error: " + e.what());
  }
  DatasetManifest m;
  try {
    m.version = j.at("version").get<int>();
    m.seed = j.at("seed").get<uint64_t>();
    m.resolution = j.at("resolution").get<int>();
    m.split = j.value("split", std::string("train"));
    for (const auto& s : j.at("samples")) m.samples.push_back(entry_from_json(s));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": manifest field error: " + e.what());
  }
  return m;
}

ManifestLookup find_sample_manifest(const std::string& sample_dir) {
  const fs::path dir = fs::absolute(fs::path(sample_dir));
  ManifestLookup out;
  fs::path manifest_path;
  if (fs::exists(dir / "manifest.json")) {
    manifest_path = dir / "manifest.json";
    out.root = dir.string();
  } else if (fs::exists(dir.parent_path() / "manifest.json")) {
    manifest_path = dir.parent_path() / "manifest.json";
    out.root = dir.parent_path().string();
  } else {
    throw DataError(sample_dir + ": no manifest.json here or in the parent");
  }
  out.manifest = read_manifest(manifest_path.string());
  if (out.manifest.samples.size() == 1) {
    out.entry_index = 0;
    return out;
  }
  const std::string name = dir.filename().string();
  for (size_t i = 0; i < out.manifest.samples.size(); ++i) {
    if (out.manifest.samples[i].name == name) {
      out.entry_index = i;
      return out;
    }
  }
  throw DataError(sample_dir + ": sample '" + name + "' not in manifest");
}

LoadedSample load_sample(const std::string& root, const SampleEntry& entry) {
  const fs::path base(root);
  LoadedSample s;
  s.mls.input = read_png((base / entry.files.input).string());
  for (const auto& rel : entry.files.lights)
    s.mls.images.push_back(read_png((base / rel).string()));
  s.mls.poses = entry.rig.poses;
  s.mls.alpha = read_png((base / entry.files.alpha).string());
  for (int y = 0; y < s.mls.alpha.height(); ++y)
    for (int x = 0; x < s.mls.alpha.width(); ++x)
      s.mls.alpha.at(x, y) = s.mls.alpha.at(x, y) > 0.5f ? 1.0f : 0.0f;
  s.depth = read_pfm((base / entry.files.depth).string());
  s.mls.validate();
  return s;
}

namespace {

SampleFiles standard_files(const std::string& name, size_t light_count) {
  SampleFiles f;
  f.input = name + "/input.png";
  for (size_t i = 0; i < light_count; ++i)
    f.lights.push_back(name + "/light_" + std::to_string(i) + ".png");
  f.normal = name + "/normal.png";
  f.albedo = name + "/albedo.png";
  f.roughness = name + "/roughness.png";
  f.metallic = name + "/metallic.png";
  f.alpha = name + "/alpha.png";
  f.depth = name + "/depth.pfm";
  return f;
}

ImagePlane clamped(const ImagePlane& img) {
  ImagePlane out = img;
  out.clamp01();
  return out;
}

}  // namespace

void write_sample(const MultiLightSet& mls, const ImagePlane& depth,
                  const GBuffer* gt, const SampleEntry& base_entry,
                  const std::string& out_dir) {
  const fs::path base(out_dir);
  fs::create_directories(base / base_entry.name);

  SampleEntry entry = base_entry;
  entry.files = standard_files(entry.name, mls.images.size());

  write_png16(clamped(mls.input), (base / entry.files.input).string());
  for (size_t i = 0; i < mls.images.size(); ++i)
    write_png16(clamped(mls.images[i]), (base / entry.files.lights[i]).string());

  if (gt) {
    write_gbuffer(*gt, (base / entry.name).string());
  } else {
    write_png16(mls.alpha, (base / entry.files.alpha).string());
    write_pfm(depth, (base / entry.files.depth).string());
  }

  DatasetManifest single;
  single.seed = base_entry.scene_seed;
  single.resolution = mls.input.width();
  single.samples.push_back(entry);
  write_manifest(single, (base / "manifest.json").string());
}

// ---------------------------------------------------------------------------
// Dataset generation

DatasetManifest generate_dataset(const DatasetOptions& opt,
                                 const std::string& out_dir) {
  if (opt.num_scenes <= 0 || opt.views_per_scene <= 0)
    throw DataError("generate_dataset: scene and view counts must be positive");
  fs::create_directories(out_dir);

  DatasetManifest manifest;
  manifest.seed = opt.seed;
  manifest.resolution = opt.resolution;
  manifest.split = opt.split;

  const int total = opt.num_scenes * opt.views_per_scene;
  std::vector<SampleEntry> entries(size_t(total));

  parallel_for(total, opt.threads, [&](int64_t idx) {
    const int scene_index = int(idx) / opt.views_per_scene;
    const int view_index = int(idx) % opt.views_per_scene;
    const uint64_t scene_seed = scene_seed_for(opt.seed, opt.split, scene_index);
    const Scene scene = generate_scene(scene_seed);

    Camera camera;
    camera.width = camera.height = opt.resolution;
    camera.look_at = {0.0, 0.0, 0.0};
    camera.up = {0.0, 1.0, 0.0};
    LightRig rig = light_rig_default();
    if (view_index == 0) {
      camera.position = {0.0, 0.0, rig.radius};
    } else {
      const uint64_t vs = hash_key(scene_seed, kStreamDatasetView,
                                   uint64_t(view_index));
      const double az = rng_uniform(vs, kStreamDatasetView, 0, 0, 0.0, kTwoPi);
      const double el = rng_uniform(vs, kStreamDatasetView, 0, 1, -0.9, 0.9);
      camera.position = {rig.radius * std::cos(el) * std::sin(az),
                         rig.radius * std::sin(el),
                         rig.radius * std::cos(el) * std::cos(az)};
    }

    const GBuffer gb = raycast_gbuffer(scene, camera, 1);
    MultiLightSet mls = render_multilight(scene, camera, rig, 1);

    // Input image: a random point light or a procedural sky environment.
    const uint64_t is = hash_key(scene_seed, kStreamInputLight,
                                 uint64_t(view_index));
    if (rng_uniform(is, kStreamInputLight, 0, 0) < 0.5) {
      const LightPose pose{rng_uniform(is, kStreamInputLight, 1, 0, 0.0, kTwoPi),
                           rng_uniform(is, kStreamInputLight, 1, 1, 0.0, kPi / 3.0)};
      mls.input = render_pointlight(scene, camera,
                                    light_position(pose, rig.radius, camera),
                                    rig.intensity, 1);
    } else {
      const Vec3 horizon{rng_uniform(is, kStreamInputLight, 2, 0, 0.3, 0.9),
                         rng_uniform(is, kStreamInputLight, 2, 1, 0.3, 0.9),
                         rng_uniform(is, kStreamInputLight, 2, 2, 0.3, 0.9)};
      const Vec3 zenith{rng_uniform(is, kStreamInputLight, 3, 0, 0.4, 1.2),
                        rng_uniform(is, kStreamInputLight, 3, 1, 0.4, 1.2),
                        rng_uniform(is, kStreamInputLight, 3, 2, 0.4, 1.2)};
      const EnvironmentMap env = EnvironmentMap::sky_gradient(32, horizon, zenith);
      mls.input = relight_env(gb, camera, env, 64, is, 1);
    }

    char name[32];
    std::snprintf(name, sizeof(name), "s%04d_v%d", scene_index, view_index);

    SampleEntry entry;
    entry.name = name;
    entry.scene_seed = scene_seed;
    entry.view_index = view_index;
    entry.camera = camera;
    entry.rig = rig;
    entry.files = standard_files(entry.name, rig.size());

    const fs::path base(out_dir);
    try {
      fs::create_directories(base / entry.name);
      write_png16(clamped(mls.input), (base / entry.files.input).string());
      for (size_t i = 0; i < mls.images.size(); ++i)
        write_png16(clamped(mls.images[i]),
                    (base / entry.files.lights[i]).string());
      write_gbuffer(gb, (base / entry.name).string());
    } catch (const std::exception& e) {
      throw DataError(std::string("sample ") + name + ": " + e.what());
    }
    entries[size_t(idx)] = std::move(entry);
  });

  manifest.samples = std::move(entries);
  write_manifest(manifest, (fs::path(out_dir) / "manifest.json").string());
  return manifest;
}

}  // namespace multilight
