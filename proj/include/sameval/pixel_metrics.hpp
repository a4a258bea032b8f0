#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>

#include "sameval/types.hpp"

namespace sameval::pixel {

/// Mean squared per-pixel difference.
double mse(const ImagePair& pair);

/// Mean absolute per-pixel difference. Always <= sqrt(mse).
double mae(const ImagePair& pair);

/// 10*log10(max_value^2 / mse). Identical images have no finite PSNR;
/// that case raises InfiniteResult so callers decide how to report it.
double psnr(const ImagePair& pair, double max_value);

struct SsimParams {
  int window_size = 11;
  double gaussian_sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 255.0;  // R; sets C1=(k1*R)^2, C2=(k2*R)^2

  void validate() const;
};

// Gaussian-weighted local statistics, valid region only: the SSIM map is
// averaged over window positions that fit entirely inside the image.
double ssim(const ImagePair& pair, const SsimParams& params);

inline constexpr std::array<double, 5> kMsSsimDefaultWeights = {0.0448, 0.2856, 0.3001, 0.2363,
                                                                0.1333};

// Multiscale SSIM over dyadic 2x2-mean-pool downsamplings. Scales 1..M-1
// contribute their mean contrast-structure term, the coarsest scale
// contributes the mean full SSIM map; each factor is raised to its weight.
// With scales=1 and weight {1} this reduces to ssim().
double ms_ssim(const ImagePair& pair, const SsimParams& params, int scales,
               std::span<const double> weights);

inline double ms_ssim(const ImagePair& pair, const SsimParams& params) {
  return ms_ssim(pair, params, 5, kMsSsimDefaultWeights);
}

/// Per-pixel max(post - pre, 0); output keeps the input R.
GrayImage subtract_clip(const GrayImage& post, const GrayImage& pre);

/// Mean and sample standard deviation (n-1) of already-computed per-pair
/// values, reduced with a fixed-shape tree so the result is independent of
/// how the values were produced.
MetricValue aggregate_metric(const std::string& name, std::span<const double> values);

/// Evaluates `metric` over all pairs (optionally in parallel) and
/// aggregates. Bit-identical for any worker count.
MetricValue dataset_metric(const std::string& name,
                           const std::function<double(const ImagePair&)>& metric,
                           std::span<const ImagePair> pairs, int jobs = 0);

}  // namespace sameval::pixel
