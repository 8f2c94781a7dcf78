// Copyright 2026 The Multilight Authors
// SPDX-License-Identifier: Apache-2.0

#include "multilight/png_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <vector>

#include "multilight/errors.hpp"

namespace multilight {

namespace {

struct FileCloser {
  void operator()(FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

void write_png_impl(const ImagePlane& img, const std::string& path,
                    int bit_depth) {
  img.validate();
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw DataError(path + ": cannot open for writing");

  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw DataError(path + ": png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw DataError(path + ": png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw DataError(path + ": png write error");
  }
  png_init_io(png, fp.get());

  const int color_type =
      img.channels() == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY;
  png_set_IHDR(png, info, png_uint_32(img.width()), png_uint_32(img.height()),
               bit_depth, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  const int ch = img.channels();
  const double maxval = bit_depth == 16 ? 65535.0 : 255.0;
  std::vector<uint8_t> row(size_t(img.width()) * ch * (bit_depth / 8));
  for (int y = 0; y < img.height(); ++y) {
    size_t k = 0;
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < ch; ++c) {
        double v = img.at(x, y, c);
        v = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
        const auto q = uint32_t(std::lround(v * maxval));
        if (bit_depth == 16) {
          row[k++] = uint8_t(q >> 8);  // network byte order
          row[k++] = uint8_t(q & 0xff);
        } else {
          row[k++] = uint8_t(q);
        }
      }
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

void write_png16(const ImagePlane& img, const std::string& path) {
  write_png_impl(img, path, 16);
}

void write_png8(const ImagePlane& img, const std::string& path) {
  write_png_impl(img, path, 8);
}

ImagePlane read_png(const std::string& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw DataError(path + ": cannot open");

  uint8_t header[8];
  if (std::fread(header, 1, 8, fp.get()) != 8 || png_sig_cmp(header, 0, 8))
    throw DataError(path + ": not a PNG file");

  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw DataError(path + ": png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw DataError(path + ": png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DataError(path + ": png read error");
  }
  png_init_io(png, fp.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  int bit_depth = png_get_bit_depth(png, info);
  int color_type = png_get_color_type(png, info);

  // Normalize to 8/16-bit gray or RGB without alpha.
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
    png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);

  bit_depth = png_get_bit_depth(png, info);
  color_type = png_get_color_type(png, info);
  const int ch = color_type == PNG_COLOR_TYPE_RGB ? 3 : 1;
  if (color_type != PNG_COLOR_TYPE_RGB && color_type != PNG_COLOR_TYPE_GRAY) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DataError(path + ": unsupported PNG color type");
  }

  ImagePlane img(int(width), int(height), ch);
  const double maxval = bit_depth == 16 ? 65535.0 : 255.0;
  std::vector<uint8_t> row(size_t(width) * ch * (bit_depth / 8));
  for (png_uint_32 y = 0; y < height; ++y) {
    png_read_row(png, row.data(), nullptr);
    size_t k = 0;
    for (png_uint_32 x = 0; x < width; ++x) {
      for (int c = 0; c < ch; ++c) {
        uint32_t q;
        if (bit_depth == 16) {
          q = (uint32_t(row[k]) << 8) | row[k + 1];
          k += 2;
        } else {
          q = row[k++];
        }
        img.at(int(x), int(y), c) = float(q / maxval);
      }
    }
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

}  // namespace multilight
