#include <doctest.h>

#include <cmath>
#include <random>

#include "sameval/pixel_metrics.hpp"
#include "support/gen.hpp"

using namespace sameval;
using namespace sameval::pixel;

namespace {

ImagePair make_pair(std::vector<double> ref, std::vector<double> cand, int w, int h,
                    double r = 255.0) {
  return validate_pair(GrayImage(w, h, std::move(ref), r, 8), GrayImage(w, h, std::move(cand), r, 8));
}

// Direct single-window evaluation: every weighted sum computed in one
// nested loop, independent of the separable filtering in the library.
double ssim_single_window_oracle(const GrayImage& a, const GrayImage& b, const SsimParams& p) {
  const int n = p.window_size;
  std::vector<double> w(static_cast<std::size_t>(n) * n);
  const double center = (n - 1) / 2.0;
  double wsum = 0.0;
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      const double d2 = (x - center) * (x - center) + (y - center) * (y - center);
      w[static_cast<std::size_t>(y) * n + x] = std::exp(-d2 / (2.0 * p.gaussian_sigma * p.gaussian_sigma));
      wsum += w[static_cast<std::size_t>(y) * n + x];
    }
  }
  for (double& v : w) v /= wsum;

  double mu_a = 0, mu_b = 0, e_aa = 0, e_bb = 0, e_ab = 0;
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      const double wi = w[static_cast<std::size_t>(y) * n + x];
      const double va = a.value(x, y);
      const double vb = b.value(x, y);
      mu_a += wi * va;
      mu_b += wi * vb;
      e_aa += wi * va * va;
      e_bb += wi * vb * vb;
      e_ab += wi * va * vb;
    }
  }
  const double c1 = (p.k1 * p.dynamic_range) * (p.k1 * p.dynamic_range);
  const double c2 = (p.k2 * p.dynamic_range) * (p.k2 * p.dynamic_range);
  const double var_a = e_aa - mu_a * mu_a;
  const double var_b = e_bb - mu_b * mu_b;
  const double cov = e_ab - mu_a * mu_b;
  return ((2 * mu_a * mu_b + c1) * (2 * cov + c2)) /
         ((mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2));
}

}  // namespace

TEST_SUITE("pixel_metrics") {

TEST_CASE("mse oracle values") {
  CHECK(mse(make_pair({5, 5, 5, 5}, {5, 5, 5, 5}, 2, 2)) == 0.0);
  CHECK(mse(make_pair({0, 0, 0, 0}, {2, 2, 2, 2}, 2, 2)) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(mse(make_pair({0, 255}, {255, 0}, 2, 1)) == doctest::Approx(65025.0).epsilon(1e-15));
}

TEST_CASE("mae oracle values") {
  CHECK(mae(make_pair({7, 7}, {7, 7}, 2, 1)) == 0.0);
  CHECK(mae(make_pair({0, 0}, {3, 1}, 2, 1)) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("mae <= sqrt(mse) on random pairs") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const auto a = testsupport::random_image(rng, 9, 7);
    const auto b = testsupport::random_image(rng, 9, 7);
    const auto pair = validate_pair(a, b);
    CHECK(mae(pair) <= std::sqrt(mse(pair)) + 1e-12);
  }
}

TEST_CASE("mse and mae are symmetric") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 50; ++i) {
    const auto a = testsupport::random_image(rng, 8, 8);
    const auto b = testsupport::random_image(rng, 8, 8);
    CHECK(mse(validate_pair(a, b)) == mse(validate_pair(b, a)));
    CHECK(mae(validate_pair(a, b)) == mae(validate_pair(b, a)));
  }
}

TEST_CASE("adding a positive constant shifts mae by exactly that constant") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 50; ++i) {
    // candidate strictly above reference so the shift cannot cross zero
    auto ref = testsupport::random_integer_image(rng, 6, 6, 100);
    std::vector<double> cand_data(ref.data().begin(), ref.data().end());
    for (double& v : cand_data) v += 101.0;
    const double c = 7.0;
    std::vector<double> shifted = cand_data;
    for (double& v : shifted) v += c;

    const double base = mae(make_pair(std::vector<double>(ref.data().begin(), ref.data().end()),
                                      cand_data, 6, 6, 65535.0));
    const double moved = mae(make_pair(std::vector<double>(ref.data().begin(), ref.data().end()),
                                       shifted, 6, 6, 65535.0));
    CHECK(moved - base == doctest::Approx(c).epsilon(1e-12));
  }
}

TEST_CASE("psnr oracle and infinite case") {
  // full-swing error: mse = R^2 -> 0 dB
  const auto pair = make_pair({0, 255}, {255, 0}, 2, 1);
  CHECK(psnr(pair, 255.0) == doctest::Approx(0.0));
  const auto same = make_pair({9, 9}, {9, 9}, 2, 1);
  try {
    psnr(same, 255.0);
    FAIL("expected InfiniteResult");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InfiniteResult);
  }
}

TEST_CASE("ssim is 1 on identical images") {
  std::mt19937_64 rng(14);
  const auto img = testsupport::random_image(rng, 16, 16);
  SsimParams params;
  CHECK(ssim(validate_pair(img, img), params) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ssim constant-image closed form") {
  SsimParams params;
  const double r = 255.0;
  const double c1 = (params.k1 * r) * (params.k1 * r);
  for (auto [a, b] : {std::pair{10.0, 20.0}, {0.0, 255.0}, {100.0, 100.0}, {255.0, 1.0}}) {
    const auto pair = validate_pair(GrayImage::constant(16, 16, a, r),
                                    GrayImage::constant(16, 16, b, r));
    const double expected = (2 * a * b + c1) / (a * a + b * b + c1);
    CHECK(ssim(pair, params) == doctest::Approx(expected).epsilon(1e-12));
  }
  // a=0, b=R: C1 / (R^2 + C1), roughly 1e-4
  const auto extreme = validate_pair(GrayImage::constant(16, 16, 0.0, r),
                                     GrayImage::constant(16, 16, r, r));
  CHECK(ssim(extreme, params) == doctest::Approx(c1 / (r * r + c1)).epsilon(1e-12));
}

TEST_CASE("ssim matches the single-window brute-force oracle") {
  std::mt19937_64 rng(15);
  SsimParams params;
  for (int i = 0; i < 300; ++i) {
    const auto a = testsupport::random_image(rng, 11, 11);
    const auto b = testsupport::random_image(rng, 11, 11);
    const double got = ssim(validate_pair(a, b), params);
    const double want = ssim_single_window_oracle(a, b, params);
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("ssim is symmetric") {
  std::mt19937_64 rng(16);
  SsimParams params;
  for (int i = 0; i < 25; ++i) {
    const auto a = testsupport::random_image(rng, 13, 13);
    const auto b = testsupport::random_image(rng, 13, 13);
    CHECK(ssim(validate_pair(a, b), params) == ssim(validate_pair(b, a), params));
  }
}

TEST_CASE("ssim rejects images smaller than the window") {
  SsimParams params;
  const auto small = validate_pair(GrayImage::constant(8, 8, 1.0, 255.0),
                                   GrayImage::constant(8, 8, 2.0, 255.0));
  try {
    ssim(small, params);
    FAIL("expected ImageTooSmall");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ImageTooSmall);
  }
}

TEST_CASE("ms_ssim identity and single-scale reduction") {
  std::mt19937_64 rng(17);
  SsimParams params;
  const auto a = testsupport::random_image(rng, 64, 64);
  const auto b = testsupport::random_image(rng, 64, 64);
  const auto same = validate_pair(a, a);
  CHECK(ms_ssim(same, params, 2, std::array<double, 2>{0.5, 0.5}) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // one scale with weight 1 is exactly ssim
  const auto pair = validate_pair(a, b);
  const double single[] = {1.0};
  CHECK(ms_ssim(pair, params, 1, single) == doctest::Approx(ssim(pair, params)).epsilon(1e-12));
}

TEST_CASE("ms_ssim constant images match the product of closed forms") {
  SsimParams params;
  const double r = 255.0;
  const double a = 40.0, b = 90.0;
  const auto pair = validate_pair(GrayImage::constant(192, 192, a, r),
                                  GrayImage::constant(192, 192, b, r));
  // constants survive mean pooling, cs term is exactly 1 at every scale,
  // luminance only contributes at the coarsest scale
  const double c1 = (params.k1 * r) * (params.k1 * r);
  const double lum = (2 * a * b + c1) / (a * a + b * b + c1);
  const double expected = std::pow(lum, kMsSsimDefaultWeights[4]);
  CHECK(ms_ssim(pair, params) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("ms_ssim in [0,1] for random nonnegative inputs and symmetric") {
  std::mt19937_64 rng(18);
  SsimParams params;
  for (int i = 0; i < 10; ++i) {
    const auto a = testsupport::random_image(rng, 192, 192);
    const auto b = testsupport::random_image(rng, 192, 192);
    const double v = ms_ssim(validate_pair(a, b), params);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    CHECK(ms_ssim(validate_pair(b, a), params) == v);
  }
}

TEST_CASE("ms_ssim rejects undersized images") {
  SsimParams params;
  const auto pair = validate_pair(GrayImage::constant(64, 64, 1.0, 255.0),
                                  GrayImage::constant(64, 64, 2.0, 255.0));
  try {
    ms_ssim(pair, params);  // needs 11 * 2^4 = 176
    FAIL("expected ImageTooSmall");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ImageTooSmall);
  }
}

TEST_CASE("subtract_clip clamps negatives to zero") {
  const GrayImage post(1, 1, {10.0}, 255.0, 8);
  const GrayImage pre(1, 1, {25.0}, 255.0, 8);
  CHECK(subtract_clip(post, pre).data()[0] == 0.0);

  const GrayImage post2(1, 1, {100.0}, 255.0, 8);
  const GrayImage pre2(1, 1, {40.0}, 255.0, 8);
  CHECK(subtract_clip(post2, pre2).data()[0] == 60.0);

  // post == pre -> all zero
  std::mt19937_64 rng(19);
  const auto img = testsupport::random_image(rng, 5, 5);
  const auto zero = subtract_clip(img, img);
  for (double v : zero.data()) CHECK(v == 0.0);

  CHECK(subtract_clip(post, pre).max_value() == 255.0);
  CHECK_THROWS_AS(subtract_clip(post, GrayImage::constant(2, 1, 0.0, 255.0)), Error);
}

TEST_CASE("dataset_metric mean, std and single-pair behavior") {
  // per-pair mae values [1, 3] -> mean 2, sample std sqrt(2)
  std::vector<ImagePair> pairs;
  pairs.push_back(make_pair({0, 0}, {1, 1}, 2, 1));  // mae 1
  pairs.push_back(make_pair({0, 0}, {3, 3}, 2, 1));  // mae 3
  const MetricValue agg = dataset_metric("mae", [](const ImagePair& p) { return mae(p); }, pairs);
  CHECK(agg.mean() == doctest::Approx(2.0));
  REQUIRE(agg.std_dev().has_value());
  CHECK(*agg.std_dev() == doctest::Approx(std::sqrt(2.0)));
  CHECK(agg.n_pairs() == 2);

  std::vector<ImagePair> one;
  one.push_back(make_pair({0, 0}, {1, 1}, 2, 1));
  const MetricValue single = dataset_metric("mae", [](const ImagePair& p) { return mae(p); }, one);
  CHECK_FALSE(single.std_dev().has_value());
  CHECK(single.n_pairs() == 1);

  std::vector<ImagePair> identical;
  identical.push_back(make_pair({5, 5}, {5, 5}, 2, 1));
  identical.push_back(make_pair({6, 6}, {6, 6}, 2, 1));
  const MetricValue zero = dataset_metric("mse", [](const ImagePair& p) { return mse(p); }, identical);
  CHECK(zero.mean() == 0.0);
  CHECK(*zero.std_dev() == 0.0);

  CHECK_THROWS_AS(dataset_metric("mse", [](const ImagePair& p) { return mse(p); },
                                 std::span<const ImagePair>{}),
                  Error);
}

TEST_CASE("dataset_metric is bit-identical across worker counts") {
  std::mt19937_64 rng(20);
  std::vector<ImagePair> pairs;
  for (int i = 0; i < 137; ++i) {
    pairs.push_back(validate_pair(testsupport::random_image(rng, 12, 12),
                                  testsupport::random_image(rng, 12, 12)));
  }
  auto metric = [](const ImagePair& p) { return mse(p); };
  const MetricValue w1 = dataset_metric("mse", metric, pairs, 1);
  const MetricValue w2 = dataset_metric("mse", metric, pairs, 2);
  const MetricValue w8 = dataset_metric("mse", metric, pairs, 8);
  CHECK(w1.mean() == w2.mean());
  CHECK(w1.mean() == w8.mean());
  CHECK(*w1.std_dev() == *w2.std_dev());
  CHECK(*w1.std_dev() == *w8.std_dev());
}

}  // TEST_SUITE
