// Copyright 2026 The Multilight Authors
// SPDX-License-Identifier: Apache-2.0

#include "multilight/pfm.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "multilight/errors.hpp"

namespace multilight {

namespace {

bool host_is_little_endian() {
  const uint16_t probe = 1;
  uint8_t byte;
  std::memcpy(&byte, &probe, 1);
  return byte == 1;
}

[[noreturn]] void parse_error(const std::string& path, size_t offset,
                              const std::string& what) {
  throw DataError(path + ": " + what + " (byte offset " +
                  std::to_string(offset) + ")");
}

}  // namespace

void write_pfm(const ImagePlane& img, const std::string& path) {
  img.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(path + ": cannot open for writing");

  const char* magic = img.channels() == 3 ? "PF" : "Pf";
  out << magic << "\n" << img.width() << " " << img.height() << "\n-1.0\n";

  // Rows bottom to top, little-endian payload.
  std::vector<char> row(size_t(img.width()) * img.channels() * 4);
  const bool little = host_is_little_endian();
  for (int y = img.height() - 1; y >= 0; --y) {
    const float* src = img.data() + size_t(y) * img.width() * img.channels();
    std::memcpy(row.data(), src, row.size());
    if (!little) {
      for (size_t i = 0; i < row.size(); i += 4) {
        std::swap(row[i], row[i + 3]);
        std::swap(row[i + 1], row[i + 2]);
      }
    }
    out.write(row.data(), std::streamsize(row.size()));
  }
  if (!out) throw DataError(path + ": write failed");
}

ImagePlane read_pfm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path + ": cannot open");

  auto read_token = [&](const char* what) {
    std::string tok;
    char c;
    // Tokens are separated by single whitespace characters.
    while (in.get(c)) {
      if (c == '\n' || c == ' ' || c == '\r' || c == '\t') {
        if (!tok.empty()) break;
        continue;
      }
      tok.push_back(c);
    }
    if (tok.empty())
      parse_error(path, size_t(in.tellg() < 0 ? 0 : in.tellg()),
                  std::string("missing ") + what);
    return tok;
  };

  const std::string magic = read_token("magic");
  if (magic != "PF" && magic != "Pf")
    parse_error(path, 0, "bad magic '" + magic + "'");
  const int channels = magic == "PF" ? 3 : 1;

  const std::string wtok = read_token("width");
  const std::string htok = read_token("height");
  int width = 0, height = 0;
  try {
    width = std::stoi(wtok);
    height = std::stoi(htok);
  } catch (const std::exception&) {
    parse_error(path, 3, "non-numeric dimension");
  }
  if (width == 0 || height == 0) parse_error(path, 3, "zero dimension");
  if (width < 0 || height < 0) parse_error(path, 3, "negative dimension");

  const std::string stok = read_token("scale");
  double scale = 0.0;
  try {
    scale = std::stod(stok);
  } catch (const std::exception&) {
    parse_error(path, size_t(in.tellg()), "non-numeric scale");
  }
  if (scale == 0.0) parse_error(path, size_t(in.tellg()), "zero scale");
  const bool payload_little = scale < 0.0;

  const size_t header_end = size_t(in.tellg());
  ImagePlane img(width, height, channels);
  std::vector<char> row(size_t(width) * channels * 4);
  const bool little = host_is_little_endian();
  for (int y = height - 1; y >= 0; --y) {
    in.read(row.data(), std::streamsize(row.size()));
    if (size_t(in.gcount()) != row.size())
      parse_error(path, header_end, "truncated payload");
    if (payload_little != little) {
      for (size_t i = 0; i < row.size(); i += 4) {
        std::swap(row[i], row[i + 3]);
        std::swap(row[i + 1], row[i + 2]);
      }
    }
    std::memcpy(img.data() + size_t(y) * width * channels, row.data(),
                row.size());
  }
  return img;
}

}  // namespace multilight
