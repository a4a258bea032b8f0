#include "sameval/extract.hpp"

#include <algorithm>
#include <cmath>

#include "sameval/onnx_runtime.hpp"
#include "sameval/resize.hpp"

namespace sameval::extractor {

void ExtractorProfile::validate() const {
  if (input_height < 1 || input_width < 1) {
    raise(ErrorKind::InvalidArgument, "profile input size must be positive");
  }
  if (extractor_id.empty()) raise(ErrorKind::InvalidArgument, "profile needs an extractor_id");
  if (output_dim < 0) raise(ErrorKind::InvalidArgument, "output_dim must be >= 0");
  if (normalization.mode == Normalization::Mode::MeanStd) {
    const auto c = static_cast<std::size_t>(channel_policy == ChannelPolicy::ReplicateGrayTo3 ? 3 : 1);
    if (normalization.channel_mean.size() != c || normalization.channel_std.size() != c) {
      raise(ErrorKind::InvalidArgument, "MeanStd normalization needs one mean/std per channel");
    }
    for (double s : normalization.channel_std) {
      if (!(s > 0.0)) raise(ErrorKind::InvalidArgument, "channel std must be > 0");
    }
  }
}

namespace {

void check_model_against_profile(const onnx::Model& model, const ExtractorProfile& profile) {
  const auto& shape = model.input_shape();
  if (shape.size() != 4) {
    raise(ErrorKind::PreprocessMismatch, "model input is not NCHW (rank " +
                                             std::to_string(shape.size()) + ")");
  }
  if (shape[1] >= 0 && shape[1] != profile.channels()) {
    raise(ErrorKind::PreprocessMismatch,
          "model expects " + std::to_string(shape[1]) + " channels, profile provides " +
              std::to_string(profile.channels()));
  }
  if (shape[2] >= 0 && shape[2] != profile.input_height) {
    raise(ErrorKind::PreprocessMismatch,
          "model expects height " + std::to_string(shape[2]) + ", profile resizes to " +
              std::to_string(profile.input_height));
  }
  if (shape[3] >= 0 && shape[3] != profile.input_width) {
    raise(ErrorKind::PreprocessMismatch,
          "model expects width " + std::to_string(shape[3]) + ", profile resizes to " +
              std::to_string(profile.input_width));
  }
}

// One image -> one CHW plane stack written at `dst`.
void preprocess_into(const GrayImage& image, const ExtractorProfile& profile, float* dst) {
  const GrayImage resized = (image.width() == profile.input_width &&
                             image.height() == profile.input_height)
                                ? image
                                : resize_bilinear(image, profile.input_width, profile.input_height);
  const auto pixels = resized.data();
  const std::size_t plane = pixels.size();
  const double r = resized.max_value();
  const auto& norm = profile.normalization;
  const int channels = profile.channels();

  for (int c = 0; c < channels; ++c) {
    float* out = dst + static_cast<std::size_t>(c) * plane;
    if (norm.mode == Normalization::Mode::ValueRange) {
      const double scale = (norm.range_hi - norm.range_lo) / r;
      for (std::size_t i = 0; i < plane; ++i) {
        out[i] = static_cast<float>(norm.range_lo + pixels[i] * scale);
      }
    } else {
      const double mean = norm.channel_mean[static_cast<std::size_t>(c)];
      const double inv_std = 1.0 / norm.channel_std[static_cast<std::size_t>(c)];
      for (std::size_t i = 0; i < plane; ++i) {
        out[i] = static_cast<float>((pixels[i] / r - mean) * inv_std);
      }
    }
  }
}

}  // namespace

FeatureMatrix extract_features(const ExtractorProfile& profile, std::span<const GrayImage> images,
                               int batch_size) {
  profile.validate();
  if (images.empty()) raise(ErrorKind::EmptyInput, "no images to extract features from");
  if (batch_size < 1) raise(ErrorKind::InvalidArgument, "batch_size must be >= 1");

  const onnx::Model model = onnx::Model::load(profile.model_path);
  check_model_against_profile(model, profile);

  const std::size_t plane =
      static_cast<std::size_t>(profile.input_height) * static_cast<std::size_t>(profile.input_width);
  const std::size_t sample = plane * static_cast<std::size_t>(profile.channels());

  Eigen::MatrixXf rows;
  std::int64_t d = profile.output_dim;

  for (std::size_t begin = 0; begin < images.size(); begin += static_cast<std::size_t>(batch_size)) {
    const std::size_t count = std::min(images.size() - begin, static_cast<std::size_t>(batch_size));
    onnx::Tensor input = onnx::Tensor::zeros({static_cast<std::int64_t>(count), profile.channels(),
                                              profile.input_height, profile.input_width});
    for (std::size_t i = 0; i < count; ++i) {
      preprocess_into(images[begin + i], profile, input.data.data() + i * sample);
    }

    onnx::Tensor output = model.run(input);
    // Accept [N, d] or [N, d, 1, 1...]: trailing singleton dims squeeze away.
    while (output.shape.size() > 2 && output.shape.back() == 1) output.shape.pop_back();
    if (output.shape.size() != 2 || output.shape[0] != static_cast<std::int64_t>(count)) {
      raise(ErrorKind::InferenceError, "model output is not one feature row per image");
    }
    const std::int64_t batch_d = output.shape[1];
    if (d == 0) d = batch_d;
    if (batch_d != d) {
      raise(ErrorKind::InferenceError, "model emitted " + std::to_string(batch_d) +
                                           "-dim features, expected " + std::to_string(d));
    }
    if (rows.size() == 0) {
      rows.resize(static_cast<Eigen::Index>(images.size()), static_cast<Eigen::Index>(d));
    }
    for (std::size_t i = 0; i < count; ++i) {
      for (std::int64_t j = 0; j < d; ++j) {
        rows(static_cast<Eigen::Index>(begin + i), static_cast<Eigen::Index>(j)) =
            output.data[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(j)];
      }
    }
  }
  return FeatureMatrix(std::move(rows), profile.extractor_id);
}

}  // namespace sameval::extractor
