#pragma once

#include <filesystem>

#include "sameval/types.hpp"

namespace sameval::extractor {

// SAMEFEAT binary feature file, bit-exact and language-neutral:
//   magic  "SAMEFEAT"                  8 bytes
//   version u16 LE                     currently 1
//   n       u64 LE
//   d       u64 LE
//   id_len  u32 LE, then extractor_id  UTF-8, no terminator
//   data    n*d float32 LE, row-major
void write_features(const FeatureMatrix& features, const std::filesystem::path& path);
FeatureMatrix read_features(const std::filesystem::path& path);

}  // namespace sameval::extractor
