#pragma once

#include <filesystem>

#include "sameval/types.hpp"

namespace sameval::data {

// Grayscale PNG, 8- or 16-bit. Decoding is bit-faithful: integer sample
// values land unchanged in the double buffer, and encode_png writes them
// back identically (values are rounded to the nearest integer and clamped
// to [0, R] first). Color or palette input raises UnsupportedFormat.
GrayImage decode_png(const std::filesystem::path& path);
void encode_png(const GrayImage& image, const std::filesystem::path& path);

}  // namespace sameval::data
