#include "sameval/pixel_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sameval/parallel.hpp"

namespace sameval::pixel {

namespace {

std::vector<double> gaussian_kernel(int size, double sigma) {
  std::vector<double> k(static_cast<std::size_t>(size));
  const double center = (size - 1) / 2.0;
  double sum = 0.0;
  for (int i = 0; i < size; ++i) {
    k[i] = std::exp(-((i - center) * (i - center)) / (2.0 * sigma * sigma));
    sum += k[i];
  }
  for (double& v : k) v /= sum;
  return k;
}

// Valid-region separable correlation with a normalized 1-D kernel applied
// along x then y. Output is (h-size+1) x (w-size+1).
struct WindowedSums {
  int out_w = 0;
  int out_h = 0;
  std::vector<double> values;
};

WindowedSums window_filter(std::span<const double> img, int w, int h,
                           std::span<const double> kernel) {
  const int size = static_cast<int>(kernel.size());
  WindowedSums out;
  out.out_w = w - size + 1;
  out.out_h = h - size + 1;

  // Horizontal pass over every row, then vertical pass over valid rows.
  std::vector<double> horiz(static_cast<std::size_t>(h) * out.out_w);
  for (int y = 0; y < h; ++y) {
    const double* row = img.data() + static_cast<std::size_t>(y) * w;
    double* dst = horiz.data() + static_cast<std::size_t>(y) * out.out_w;
    for (int x = 0; x < out.out_w; ++x) {
      double acc = 0.0;
      for (int i = 0; i < size; ++i) acc += kernel[i] * row[x + i];
      dst[x] = acc;
    }
  }
  out.values.resize(static_cast<std::size_t>(out.out_h) * out.out_w);
  for (int y = 0; y < out.out_h; ++y) {
    double* dst = out.values.data() + static_cast<std::size_t>(y) * out.out_w;
    for (int x = 0; x < out.out_w; ++x) {
      double acc = 0.0;
      for (int j = 0; j < size; ++j) {
        acc += kernel[j] * horiz[static_cast<std::size_t>(y + j) * out.out_w + x];
      }
      dst[x] = acc;
    }
  }
  return out;
}

struct SsimMapMeans {
  double full = 0.0;  // mean of luminance * contrast-structure
  double cs = 0.0;    // mean of the contrast-structure term alone
};

SsimMapMeans ssim_means(const GrayImage& a, const GrayImage& b, const SsimParams& params) {
  const int w = a.width();
  const int h = a.height();
  const auto kernel = gaussian_kernel(params.window_size, params.gaussian_sigma);

  const auto pa = a.data();
  const auto pb = b.data();
  const std::size_t n = pa.size();
  std::vector<double> aa(n), bb(n), ab(n);
  for (std::size_t i = 0; i < n; ++i) {
    aa[i] = pa[i] * pa[i];
    bb[i] = pb[i] * pb[i];
    ab[i] = pa[i] * pb[i];
  }

  const auto mu_a = window_filter(pa, w, h, kernel);
  const auto mu_b = window_filter(pb, w, h, kernel);
  const auto e_aa = window_filter(aa, w, h, kernel);
  const auto e_bb = window_filter(bb, w, h, kernel);
  const auto e_ab = window_filter(ab, w, h, kernel);

  const double c1 = (params.k1 * params.dynamic_range) * (params.k1 * params.dynamic_range);
  const double c2 = (params.k2 * params.dynamic_range) * (params.k2 * params.dynamic_range);

  const std::size_t m = mu_a.values.size();
  std::vector<double> full(m), cs(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double ma = mu_a.values[i];
    const double mb = mu_b.values[i];
    const double var_a = e_aa.values[i] - ma * ma;
    const double var_b = e_bb.values[i] - mb * mb;
    const double cov = e_ab.values[i] - ma * mb;
    const double lum = (2.0 * ma * mb + c1) / (ma * ma + mb * mb + c1);
    const double cs_term = (2.0 * cov + c2) / (var_a + var_b + c2);
    full[i] = lum * cs_term;
    cs[i] = cs_term;
  }
  SsimMapMeans out;
  out.full = pairwise_sum(full) / static_cast<double>(m);
  out.cs = pairwise_sum(cs) / static_cast<double>(m);
  return out;
}

GrayImage downsample_2x2_mean(const GrayImage& img) {
  // Trailing odd row/column dropped.
  const int ow = img.width() / 2;
  const int oh = img.height() / 2;
  std::vector<double> out(static_cast<std::size_t>(ow) * oh);
  const auto src = img.data();
  const int w = img.width();
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      const std::size_t base = static_cast<std::size_t>(2 * y) * w + 2 * x;
      out[static_cast<std::size_t>(y) * ow + x] =
          (src[base] + src[base + 1] + src[base + w] + src[base + w + 1]) * 0.25;
    }
  }
  return GrayImage(ow, oh, std::move(out), img.max_value(), img.bit_depth_origin());
}

}  // namespace

double mse(const ImagePair& pair) {
  const auto a = pair.reference().data();
  const auto b = pair.candidate().data();
  std::vector<double> sq(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sq[i] = d * d;
  }
  return pairwise_sum(sq) / static_cast<double>(a.size());
}

double mae(const ImagePair& pair) {
  const auto a = pair.reference().data();
  const auto b = pair.candidate().data();
  std::vector<double> ad(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) ad[i] = std::abs(a[i] - b[i]);
  return pairwise_sum(ad) / static_cast<double>(a.size());
}

double psnr(const ImagePair& pair, double max_value) {
  if (!(max_value > 0.0)) raise(ErrorKind::InvalidArgument, "psnr needs max_value > 0");
  const double err = mse(pair);
  if (err == 0.0) {
    raise(ErrorKind::InfiniteResult, "psnr of identical images is unbounded");
  }
  return 10.0 * std::log10(max_value * max_value / err);
}

void SsimParams::validate() const {
  if (window_size < 3 || window_size % 2 == 0) {
    raise(ErrorKind::InvalidArgument, "SSIM window_size must be odd and >= 3");
  }
  if (!(gaussian_sigma > 0.0)) raise(ErrorKind::InvalidArgument, "gaussian_sigma must be > 0");
  if (!(k1 > 0.0) || !(k2 > 0.0)) raise(ErrorKind::InvalidArgument, "k1 and k2 must be > 0");
  if (!(dynamic_range > 0.0)) raise(ErrorKind::InvalidArgument, "dynamic_range must be > 0");
}

double ssim(const ImagePair& pair, const SsimParams& params) {
  params.validate();
  const auto& a = pair.reference();
  if (a.width() < params.window_size || a.height() < params.window_size) {
    raise(ErrorKind::ImageTooSmall,
          std::to_string(a.width()) + "x" + std::to_string(a.height()) +
              " image cannot host a " + std::to_string(params.window_size) + "-pixel window");
  }
  return ssim_means(a, pair.candidate(), params).full;
}

double ms_ssim(const ImagePair& pair, const SsimParams& params, int scales,
               std::span<const double> weights) {
  params.validate();
  if (scales < 1) raise(ErrorKind::InvalidArgument, "ms_ssim needs at least one scale");
  if (static_cast<int>(weights.size()) != scales) {
    raise(ErrorKind::InvalidArgument, "ms_ssim needs one weight per scale");
  }
  const int needed = params.window_size << (scales - 1);
  if (pair.reference().width() < needed || pair.reference().height() < needed) {
    raise(ErrorKind::ImageTooSmall, "ms_ssim with " + std::to_string(scales) +
                                        " scales needs images of at least " +
                                        std::to_string(needed) + " pixels per side");
  }

  GrayImage a = pair.reference();
  GrayImage b = pair.candidate();
  double result = 1.0;
  for (int s = 0; s < scales; ++s) {
    const auto means = ssim_means(a, b, params);
    const bool coarsest = (s == scales - 1);
    // Negative contrast-structure means clamp to 0 so fractional weights
    // stay real and the result stays in [0, 1].
    const double term = std::max(coarsest ? means.full : means.cs, 0.0);
    result *= std::pow(term, weights[s]);
    if (!coarsest) {
      a = downsample_2x2_mean(a);
      b = downsample_2x2_mean(b);
    }
  }
  return result;
}

GrayImage subtract_clip(const GrayImage& post, const GrayImage& pre) {
  if (post.width() != pre.width() || post.height() != pre.height()) {
    raise(ErrorKind::DimensionMismatch,
          "subtract_clip: post " + std::to_string(post.width()) + "x" +
              std::to_string(post.height()) + " vs pre " + std::to_string(pre.width()) + "x" +
              std::to_string(pre.height()));
  }
  if (post.max_value() != pre.max_value()) {
    raise(ErrorKind::RangeMismatch, "subtract_clip: operands have different R");
  }
  const auto p = post.data();
  const auto q = pre.data();
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = std::max(p[i] - q[i], 0.0);
  return GrayImage(post.width(), post.height(), std::move(out), post.max_value(),
                   post.bit_depth_origin());
}

MetricValue aggregate_metric(const std::string& name, std::span<const double> values) {
  if (values.empty()) raise(ErrorKind::EmptyDataset, "no per-pair values to aggregate");
  const auto n = static_cast<double>(values.size());
  const double mean = pairwise_sum(values) / n;

  std::optional<double> std_dev;
  if (values.size() >= 2 && std::isfinite(mean)) {
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double d = values[i] - mean;
      sq[i] = d * d;
    }
    std_dev = std::sqrt(pairwise_sum(sq) / (n - 1.0));
  }
  return MetricValue(name, mean, std_dev, static_cast<std::int64_t>(values.size()));
}

MetricValue dataset_metric(const std::string& name,
                           const std::function<double(const ImagePair&)>& metric,
                           std::span<const ImagePair> pairs, int jobs) {
  if (pairs.empty()) raise(ErrorKind::EmptyDataset, "dataset_metric over zero pairs");
  std::vector<double> values(pairs.size());
  parallel_for(pairs.size(), jobs, [&](std::size_t i) { values[i] = metric(pairs[i]); });
  return aggregate_metric(name, values);
}

}  // namespace sameval::pixel
