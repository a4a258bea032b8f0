#include "sameval/perceptual.hpp"

#include <cmath>

#include "sameval/parallel.hpp"

namespace sameval::pixel {

LayeredFeatures LayeredFeatures::normalized(std::vector<FeatureMap> raw_layers,
                                            std::string source_id) {
  if (raw_layers.empty()) raise(ErrorKind::InvalidArgument, "need at least one feature layer");
  for (auto& layer : raw_layers) {
    if (layer.height < 1 || layer.width < 1 || layer.channels < 1) {
      raise(ErrorKind::InvalidArgument, "feature map dims must be positive");
    }
    const std::size_t expected = layer.position_count() * layer.channels;
    if (layer.data.size() != expected) {
      raise(ErrorKind::InvalidArgument, "feature map buffer does not match dims");
    }
    for (float v : layer.data) {
      if (!std::isfinite(v)) raise(ErrorKind::InvalidArgument, "non-finite feature value");
    }
    const std::size_t positions = layer.position_count();
    const int c = layer.channels;
    for (std::size_t p = 0; p < positions; ++p) {
      float* vec = layer.data.data() + p * c;
      double norm_sq = 0.0;
      for (int k = 0; k < c; ++k) norm_sq += static_cast<double>(vec[k]) * vec[k];
      const double norm = std::sqrt(norm_sq);
      if (norm > 0.0) {
        for (int k = 0; k < c; ++k) vec[k] = static_cast<float>(vec[k] / norm);
      }
    }
  }
  return LayeredFeatures(std::move(raw_layers), std::move(source_id));
}

double perceptual_distance(const LayeredFeatures& ref, const LayeredFeatures& cand,
                           std::span<const std::vector<double>> layer_weights) {
  const auto& a = ref.layers();
  const auto& b = cand.layers();
  if (a.size() != b.size()) {
    raise(ErrorKind::ShapeMismatch, "feature stacks have different layer counts");
  }
  if (layer_weights.size() != a.size()) {
    raise(ErrorKind::ShapeMismatch, "need one weight vector per layer");
  }

  std::vector<double> per_layer(a.size());
  for (std::size_t l = 0; l < a.size(); ++l) {
    const auto& la = a[l];
    const auto& lb = b[l];
    if (la.height != lb.height || la.width != lb.width || la.channels != lb.channels) {
      raise(ErrorKind::ShapeMismatch, "layer " + std::to_string(l) + " shapes differ");
    }
    const auto& weights = layer_weights[l];
    if (static_cast<int>(weights.size()) != la.channels) {
      raise(ErrorKind::ShapeMismatch,
            "layer " + std::to_string(l) + " weight count does not match channels");
    }
    const std::size_t positions = la.position_count();
    const int c = la.channels;
    std::vector<double> per_position(positions);
    for (std::size_t p = 0; p < positions; ++p) {
      const float* va = la.data.data() + p * c;
      const float* vb = lb.data.data() + p * c;
      double acc = 0.0;
      for (int k = 0; k < c; ++k) {
        const double d = static_cast<double>(va[k]) - static_cast<double>(vb[k]);
        acc += weights[k] * d * d;
      }
      per_position[p] = acc;
    }
    per_layer[l] = pairwise_sum(per_position) / static_cast<double>(positions);
  }
  return pairwise_sum(per_layer);
}

}  // namespace sameval::pixel
