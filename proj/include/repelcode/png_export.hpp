#pragma once

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "repelcode/field.hpp"

namespace repelcode {

/// Maps a field linearly onto 0..65535 by its maximum (negative values clamp
/// to 0). Lossy; meant for looking at codings, not for reloading them.
inline std::vector<std::uint16_t> to_gray16(const ScalarField& field) {
  double peak = 0.0;
  for (double v : field.values()) {
    if (std::isfinite(v)) peak = std::max(peak, v);
  }
  std::vector<std::uint16_t> out(field.size(), 0);
  if (peak <= 0) return out;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double v = field.values()[i];
    const double scaled = std::isfinite(v) ? std::clamp(v / peak, 0.0, 1.0) : 1.0;
    out[i] = static_cast<std::uint16_t>(std::lround(scaled * 65535.0));
  }
  return out;
}

inline void export_png16(const std::string& path, const ScalarField& field) {
  const std::vector<std::uint16_t> gray = to_gray16(field);

  std::unique_ptr<std::FILE, int (*)(std::FILE*)> file(std::fopen(path.c_str(), "wb"),
                                                       &std::fclose);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");

  const auto width = static_cast<png_uint_32>(field.width());
  const auto height = static_cast<png_uint_32>(field.height());
  std::vector<png_byte> row(2 * static_cast<std::size_t>(width));

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("png_create_info_struct failed");
  }
  // libpng reports errors through longjmp; keep this frame free of
  // non-trivial locals created after this point.
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("libpng failed writing '" + path + "'");
  }

  png_init_io(png, file.get());
  png_set_IHDR(png, info, width, height, 16, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (png_uint_32 r = 0; r < height; ++r) {
    for (png_uint_32 c = 0; c < width; ++c) {
      const std::uint16_t v = gray[static_cast<std::size_t>(r) * width + c];
      row[2 * c] = static_cast<png_byte>(v >> 8);  // PNG samples are big-endian
      row[2 * c + 1] = static_cast<png_byte>(v & 0xFF);
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace repelcode
