#include "sameval/png_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <memory>
#include <vector>

namespace sameval::data {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FileHandle = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

GrayImage decode_png(const std::filesystem::path& path) {
  FileHandle file(std::fopen(path.string().c_str(), "rb"));
  if (!file) raise(ErrorKind::IoError, "cannot open '" + path.string() + "'");

  png_byte header[8];
  if (std::fread(header, 1, 8, file.get()) != 8 || png_sig_cmp(header, 0, 8) != 0) {
    raise(ErrorKind::DecodeError, "'" + path.string() + "' is not a PNG file");
  }

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    raise(ErrorKind::DecodeError, "libpng initialization failed");
  }

  std::vector<png_bytep> row_pointers;
  std::vector<png_byte> raster;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    raise(ErrorKind::DecodeError, "libpng failed while reading '" + path.string() + "'");
  }

  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);

  if (color_type != PNG_COLOR_TYPE_GRAY) {
    png_destroy_read_struct(&png, &info, nullptr);
    raise(ErrorKind::UnsupportedFormat,
          "'" + path.string() + "' is not grayscale (color type " + std::to_string(color_type) + ")");
  }
  if (bit_depth != 8 && bit_depth != 16) {
    if (bit_depth < 8) {
      png_set_expand_gray_1_2_4_to_8(png);
    } else {
      png_destroy_read_struct(&png, &info, nullptr);
      raise(ErrorKind::UnsupportedFormat, "unsupported PNG bit depth " + std::to_string(bit_depth));
    }
  }
  png_read_update_info(png, info);

  const int effective_depth = bit_depth <= 8 ? 8 : 16;
  const std::size_t stride = static_cast<std::size_t>(width) * (effective_depth / 8);
  raster.resize(stride * height);
  row_pointers.resize(height);
  for (png_uint_32 y = 0; y < height; ++y) row_pointers[y] = raster.data() + y * stride;
  png_read_image(png, row_pointers.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  std::vector<double> pixels(static_cast<std::size_t>(width) * height);
  if (effective_depth == 8) {
    for (std::size_t i = 0; i < pixels.size(); ++i) pixels[i] = raster[i];
  } else {
    // PNG 16-bit samples are big-endian in the file.
    for (std::size_t i = 0; i < pixels.size(); ++i) {
      pixels[i] = static_cast<double>(raster[2 * i]) * 256.0 + raster[2 * i + 1];
    }
  }
  const double max_value = effective_depth == 8 ? 255.0 : 65535.0;
  return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(pixels), max_value,
                   effective_depth);
}

void encode_png(const GrayImage& image, const std::filesystem::path& path) {
  FileHandle file(std::fopen(path.string().c_str(), "wb"));
  if (!file) raise(ErrorKind::IoError, "cannot open '" + path.string() + "' for writing");

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    raise(ErrorKind::IoError, "libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    raise(ErrorKind::IoError, "libpng failed while writing '" + path.string() + "'");
  }

  const int depth = image.bit_depth_origin();
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width()),
               static_cast<png_uint_32>(image.height()), depth, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  const auto pixels = image.data();
  const std::uint32_t sample_max = depth == 8 ? 255u : 65535u;
  const std::size_t stride = static_cast<std::size_t>(image.width()) * (depth / 8);
  std::vector<png_byte> row(stride);
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      double v = std::round(pixels[static_cast<std::size_t>(y) * image.width() + x]);
      v = std::min(std::max(v, 0.0), static_cast<double>(sample_max));
      const auto s = static_cast<std::uint32_t>(v);
      if (depth == 8) {
        row[static_cast<std::size_t>(x)] = static_cast<png_byte>(s);
      } else {
        row[2 * static_cast<std::size_t>(x)] = static_cast<png_byte>(s >> 8);
        row[2 * static_cast<std::size_t>(x) + 1] = static_cast<png_byte>(s & 0xff);
      }
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace sameval::data
