#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sameval/types.hpp"

namespace sameval::extractor {

enum class ChannelPolicy { ReplicateGrayTo3, Single };

/// How decoded intensities map to network inputs. ValueRange rescales the
/// [0, R] intensity scale linearly into [lo, hi]; MeanStd first maps to
/// [0, 1] then applies per-channel (x - mean) / std.
struct Normalization {
  enum class Mode { ValueRange, MeanStd };
  Mode mode = Mode::ValueRange;
  double range_lo = -1.0;
  double range_hi = 1.0;
  std::vector<double> channel_mean;
  std::vector<double> channel_std;
};

// One extractor configuration: the model file plus the preprocessing the
// features were defined under. Two presets mirror common usage — a
// general-domain and a radiology-domain model — but they are configuration,
// not code: callers supply the model files.
struct ExtractorProfile {
  std::filesystem::path model_path;
  int input_height = 299;
  int input_width = 299;
  ChannelPolicy channel_policy = ChannelPolicy::ReplicateGrayTo3;
  Normalization normalization;
  std::string extractor_id;
  std::int64_t output_dim = 0;  // 0: accept whatever the model emits

  void validate() const;
  int channels() const { return channel_policy == ChannelPolicy::ReplicateGrayTo3 ? 3 : 1; }
};

// Preprocess (bilinear resize, channel replication, normalization), run the
// model in batches and return one feature row per image, in input order.
// Batching cannot change the values: every sample is evaluated
// independently of its batch neighbours.
FeatureMatrix extract_features(const ExtractorProfile& profile, std::span<const GrayImage> images,
                               int batch_size = 8);

}  // namespace sameval::extractor
