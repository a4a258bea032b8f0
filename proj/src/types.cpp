#include "sameval/types.hpp"

#include <cmath>

namespace sameval {

namespace {

void check_positive_dims(int width, int height) {
  if (width < 1 || height < 1) {
    raise(ErrorKind::InvalidArgument, "image dimensions must be positive, got " +
                                          std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace

GrayImage::GrayImage(int width, int height, std::vector<double> data, double max_value,
                     int bit_depth_origin)
    : width_(width),
      height_(height),
      data_(std::move(data)),
      max_value_(max_value),
      bit_depth_origin_(bit_depth_origin) {
  check_positive_dims(width, height);
  if (bit_depth_origin_ != 8 && bit_depth_origin_ != 16) {
    raise(ErrorKind::InvalidArgument,
          "bit_depth_origin must be 8 or 16, got " + std::to_string(bit_depth_origin_));
  }
  if (!(max_value_ > 0.0) || !std::isfinite(max_value_)) {
    raise(ErrorKind::InvalidArgument, "max_value must be positive and finite");
  }
  if (data_.size() != static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_)) {
    raise(ErrorKind::InvalidArgument,
          "pixel buffer size " + std::to_string(data_.size()) + " does not match " +
              std::to_string(width_) + "x" + std::to_string(height_));
  }
  for (double v : data_) {
    if (!std::isfinite(v) || v < 0.0 || v > max_value_) {
      raise(ErrorKind::InvalidArgument,
            "intensity " + std::to_string(v) + " outside [0, " + std::to_string(max_value_) + "]");
    }
  }
}

GrayImage GrayImage::constant(int width, int height, double value, double max_value,
                              int bit_depth_origin) {
  check_positive_dims(width, height);
  std::vector<double> data(static_cast<std::size_t>(width) * height, value);
  return GrayImage(width, height, std::move(data), max_value, bit_depth_origin);
}

ImagePair validate_pair(GrayImage reference, GrayImage candidate, std::string pair_id) {
  if (reference.width() != candidate.width() || reference.height() != candidate.height()) {
    raise(ErrorKind::DimensionMismatch,
          "pair '" + pair_id + "': reference " + std::to_string(reference.width()) + "x" +
              std::to_string(reference.height()) + " vs candidate " +
              std::to_string(candidate.width()) + "x" + std::to_string(candidate.height()));
  }
  if (reference.max_value() != candidate.max_value()) {
    raise(ErrorKind::RangeMismatch,
          "pair '" + pair_id + "': reference R=" + std::to_string(reference.max_value()) +
              " vs candidate R=" + std::to_string(candidate.max_value()));
  }
  return ImagePair(std::move(reference), std::move(candidate), std::move(pair_id));
}

FeatureMatrix::FeatureMatrix(Eigen::MatrixXf rows, std::string extractor_id)
    : rows_(std::move(rows)), extractor_id_(std::move(extractor_id)) {
  if (rows_.rows() < 1 || rows_.cols() < 1) {
    raise(ErrorKind::InvalidArgument, "feature matrix must be at least 1x1");
  }
  if (!rows_.allFinite()) {
    raise(ErrorKind::InvalidArgument, "feature matrix contains non-finite entries");
  }
}

GaussianStats::GaussianStats(Eigen::VectorXd mean, Eigen::MatrixXd cov, std::int64_t n_samples)
    : mean_(std::move(mean)), cov_(std::move(cov)), n_samples_(n_samples) {
  if (mean_.size() < 1) raise(ErrorKind::InvalidArgument, "empty mean vector");
  if (cov_.rows() != mean_.size() || cov_.cols() != mean_.size()) {
    raise(ErrorKind::InvalidArgument, "covariance shape does not match mean dimension");
  }
  if (n_samples_ < 2) {
    raise(ErrorKind::TooFewSamples,
          "Gaussian stats need n >= 2 samples, got " + std::to_string(n_samples_));
  }
  if (!mean_.allFinite() || !cov_.allFinite()) {
    raise(ErrorKind::InvalidArgument, "non-finite Gaussian statistics");
  }
  const double scale = cov_.cwiseAbs().maxCoeff();
  const double asym = (cov_ - cov_.transpose()).cwiseAbs().maxCoeff();
  if (scale > 0.0 && asym > 1e-9 * scale) {
    raise(ErrorKind::NotSymmetric, "covariance asymmetry " + std::to_string(asym / scale) +
                                       " (relative) exceeds 1e-9");
  }
}

const char* to_string(Direction direction) {
  return direction == Direction::LowerIsBetter ? "lower" : "higher";
}

Direction parse_direction(const std::string& text) {
  if (text == "lower" || text == "lower_is_better") return Direction::LowerIsBetter;
  if (text == "higher" || text == "higher_is_better") return Direction::HigherIsBetter;
  raise(ErrorKind::FormatError, "unknown direction '" + text + "' (expected lower|higher)");
}

MetricTable::MetricTable(std::vector<std::string> checkpoints, std::vector<MetricColumn> columns)
    : checkpoints_(std::move(checkpoints)), columns_(std::move(columns)) {
  if (checkpoints_.empty()) raise(ErrorKind::InvalidArgument, "metric table has no checkpoints");
  for (const auto& column : columns_) {
    if (column.values.size() != checkpoints_.size()) {
      raise(ErrorKind::InvalidArgument,
            "column '" + column.name + "' has " + std::to_string(column.values.size()) +
                " values for " + std::to_string(checkpoints_.size()) + " checkpoints");
    }
    std::size_t present = 0;
    for (const auto& value : column.values) {
      if (!value.has_value()) continue;
      ++present;
      if (!std::isfinite(*value)) {
        raise(ErrorKind::InvalidArgument, "column '" + column.name + "' has a non-finite value");
      }
    }
    if (present < 2) {
      raise(ErrorKind::TooFewValues,
            "column '" + column.name + "' has fewer than 2 present values");
    }
  }
}

const MetricColumn* MetricTable::find_column(const std::string& name) const {
  for (const auto& column : columns_) {
    if (column.name == name) return &column;
  }
  return nullptr;
}

VoxelMask::VoxelMask(int nx, int ny, int nz, std::vector<std::uint8_t> data,
                     std::optional<std::array<double, 3>> spacing_mm)
    : nx_(nx), ny_(ny), nz_(nz), data_(std::move(data)), spacing_mm_(spacing_mm) {
  if (nx_ < 1 || ny_ < 1 || nz_ < 1) raise(ErrorKind::InvalidArgument, "mask dims must be positive");
  const std::size_t expected =
      static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_) * static_cast<std::size_t>(nz_);
  if (data_.size() != expected) {
    raise(ErrorKind::InvalidArgument, "mask buffer size " + std::to_string(data_.size()) +
                                          " does not match dims product " + std::to_string(expected));
  }
  for (std::uint8_t v : data_) {
    if (v > 1) raise(ErrorKind::InvalidArgument, "mask voxels must be 0 or 1");
  }
  if (spacing_mm_) {
    for (double s : *spacing_mm_) {
      if (!(s > 0.0) || !std::isfinite(s)) {
        raise(ErrorKind::InvalidArgument, "voxel spacing must be positive");
      }
    }
  }
}

std::size_t VoxelMask::set_count() const {
  std::size_t count = 0;
  for (std::uint8_t v : data_) count += v;
  return count;
}

ScalarVolume::ScalarVolume(int nx, int ny, int nz, std::vector<double> data, double max_value,
                           int bit_depth_origin)
    : nx_(nx),
      ny_(ny),
      nz_(nz),
      data_(std::move(data)),
      max_value_(max_value),
      bit_depth_origin_(bit_depth_origin) {
  if (nx_ < 1 || ny_ < 1 || nz_ < 1) raise(ErrorKind::InvalidArgument, "volume dims must be positive");
  const std::size_t expected =
      static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_) * static_cast<std::size_t>(nz_);
  if (data_.size() != expected) {
    raise(ErrorKind::InvalidArgument, "volume buffer does not match dims");
  }
}

std::span<const double> ScalarVolume::slice(int z) const {
  if (z < 0 || z >= nz_) raise(ErrorKind::InvalidArgument, "slice index out of range");
  const std::size_t plane = static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_);
  return std::span<const double>(data_).subspan(static_cast<std::size_t>(z) * plane, plane);
}

MetricValue::MetricValue(std::string name, double mean, std::optional<double> std_dev,
                         std::int64_t n_pairs)
    : name_(std::move(name)), mean_(mean), std_dev_(std_dev), n_pairs_(n_pairs) {
  if (name_.empty()) raise(ErrorKind::InvalidArgument, "metric value needs a name");
  if (n_pairs_ < 1) raise(ErrorKind::InvalidArgument, "metric value needs n_pairs >= 1");
  if (std_dev_.has_value()) {
    if (n_pairs_ < 2) {
      raise(ErrorKind::InvalidArgument, "std is only defined for n_pairs >= 2");
    }
    if (!(*std_dev_ >= 0.0)) {
      raise(ErrorKind::InvalidArgument, "std must be >= 0");
    }
  }
}

}  // namespace sameval
