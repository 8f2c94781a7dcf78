// Copyright 2026 The Multilight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "multilight/image.hpp"

namespace multilight {

/// Portable float map. Header is exactly "PF\n<w> <h>\n-1.0\n" (color) or
/// "Pf\n<w> <h>\n-1.0\n" (grayscale); payload is 4-byte little-endian
/// floats, rows bottom to top. Round trips are bit-exact.
void write_pfm(const ImagePlane& img, const std::string& path);

/// Throws DataError naming the byte offset on malformed headers or a
/// truncated payload; a positive scale (big-endian payload) is byte-swapped.
ImagePlane read_pfm(const std::string& path);

}  // namespace multilight
