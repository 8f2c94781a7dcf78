// Copyright 2026 The Multilight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "multilight/image.hpp"

namespace multilight {

/// 16-bit PNG (grayscale or RGB, no interlacing). Values are clamped to
/// [0,1] and quantized to 65535 levels.
void write_png16(const ImagePlane& img, const std::string& path);

/// 8-bit PNG for display exports (tonemapped images).
void write_png8(const ImagePlane& img, const std::string& path);

/// Reads 8- or 16-bit grayscale/RGB PNGs back to [0,1] floats.
/// Throws DataError on missing or malformed files.
ImagePlane read_png(const std::string& path);

}  // namespace multilight
