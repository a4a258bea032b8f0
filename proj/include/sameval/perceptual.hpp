#pragma once

#include <span>
#include <string>
#include <vector>

#include "sameval/error.hpp"

namespace sameval::pixel {

/// One layer of network activations, HWC layout.
struct FeatureMap {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<float> data;

  std::size_t position_count() const {
    return static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  }
};

// Per-layer feature stacks with the channel vector at every spatial
// position scaled to unit norm (zero vectors stay zero). Extractor-agnostic:
// whatever network produced the activations, the distance below only sees
// these normalized maps.
class LayeredFeatures {
 public:
  static LayeredFeatures normalized(std::vector<FeatureMap> raw_layers, std::string source_id);

  const std::vector<FeatureMap>& layers() const noexcept { return layers_; }
  const std::string& source_id() const noexcept { return source_id_; }

 private:
  LayeredFeatures(std::vector<FeatureMap> layers, std::string source_id)
      : layers_(std::move(layers)), source_id_(std::move(source_id)) {}

  std::vector<FeatureMap> layers_;
  std::string source_id_;
};

// Sum over layers of the spatially averaged, per-channel weighted squared
// difference of unit-normalized activations. 0 iff the stacks are identical.
// layer_weights: one weight vector per layer, one entry per channel.
double perceptual_distance(const LayeredFeatures& ref, const LayeredFeatures& cand,
                           std::span<const std::vector<double>> layer_weights);

}  // namespace sameval::pixel
