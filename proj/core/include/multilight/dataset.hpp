// Copyright 2026 The Multilight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "multilight/camera.hpp"
#include "multilight/gbuffer.hpp"
#include "multilight/image.hpp"
#include "multilight/light_rig.hpp"
#include "multilight/sdf_scene.hpp"

namespace multilight {

/// File map of one sample, relative to the dataset root:
///   <scene>_<view>/{input.png, light_0..L-1.png, normal.png, albedo.png,
///                   roughness.png, metallic.png, alpha.png, depth.pfm}
struct SampleFiles {
  std::string input;
  std::vector<std::string> lights;
  std::string normal;
  std::string albedo;
  std::string roughness;
  std::string metallic;
  std::string alpha;
  std::string depth;
};

struct SampleEntry {
  std::string name;  // "<scene>_<view>" directory name
  uint64_t scene_seed = 0;
  int view_index = 0;
  Camera camera;
  LightRig rig;  // poses as rendered (augmented samples may differ)
  SampleFiles files;
};

struct DatasetManifest {
  int version = 1;
  uint64_t seed = 0;
  int resolution = 256;
  std::string split = "train";
  std::vector<SampleEntry> samples;
};

/// Deterministically builds 1-3 primitives with procedural material
/// fields: roughness levels from {0.2, 0.5, 0.8}, metallic from {0, 1}
/// per region, everything inside the radius-1.5 bounding sphere.
Scene generate_scene(uint64_t seed);

struct DatasetOptions {
  int num_scenes = 40;
  int views_per_scene = 2;
  int resolution = 256;
  uint64_t seed = 0;
  std::string split = "train";  // "train" / "test" pick disjoint seed ranges
  int threads = 0;
};

/// Renders every scene/view (front view plus seeded random directions at
/// the rig radius), writes the sample files plus manifest.json, and
/// returns the manifest. Regeneration with the same options is
/// deterministic down to file bytes. I/O failures carry path context.
DatasetManifest generate_dataset(const DatasetOptions& options,
                                 const std::string& out_dir);

/// Per-scene seed for a (seed, split, index) triple; train and test ranges
/// are disjoint.
uint64_t scene_seed_for(uint64_t dataset_seed, const std::string& split,
                        int scene_index);

/// G-buffer maps on disk: normals via encode_normal to 16-bit PNG, albedo
/// 16-bit PNG (linear), roughness/metallic/alpha 16-bit grayscale PNG,
/// hit depth as PFM. read_gbuffer re-normalizes normals and re-binarizes
/// alpha; it throws DataError listing any missing maps.
void write_gbuffer(const GBuffer& gb, const std::string& dir);
GBuffer read_gbuffer(const std::string& dir);

/// Manifest (de)serialization; writes are atomic (temp file + rename).
void write_manifest(const DatasetManifest& manifest, const std::string& path);
DatasetManifest read_manifest(const std::string& path);

/// Locates the manifest governing a sample directory: first
/// <dir>/manifest.json, then <dir>/../manifest.json. Returns the manifest
/// root directory and the entry index for `dir`.
struct ManifestLookup {
  DatasetManifest manifest;
  std::string root;
  size_t entry_index = 0;
};
ManifestLookup find_sample_manifest(const std::string& sample_dir);

/// Loads a sample's images as a MultiLightSet (poses from the manifest)
/// plus the hit-depth plane.
struct LoadedSample {
  MultiLightSet mls;
  ImagePlane depth;
};
LoadedSample load_sample(const std::string& root, const SampleEntry& entry);

/// Writes the images of a (possibly augmented) sample in the standard
/// layout and a single-sample manifest beside them.
void write_sample(const MultiLightSet& mls, const ImagePlane& depth,
                  const GBuffer* gt, const SampleEntry& base_entry,
                  const std::string& out_dir);

}  // namespace multilight
