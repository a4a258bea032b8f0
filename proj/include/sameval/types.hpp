#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sameval/error.hpp"

namespace sameval {

/// 2-D scalar raster, the unit of paired comparison. Intensities are held
/// as doubles on the decoded integer scale; the originating bit depth and
/// the nominal maximum R are recorded but never used in arithmetic.
class GrayImage {
 public:
  GrayImage(int width, int height, std::vector<double> data, double max_value,
            int bit_depth_origin);

  static GrayImage constant(int width, int height, double value, double max_value,
                            int bit_depth_origin = 8);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  double max_value() const noexcept { return max_value_; }
  int bit_depth_origin() const noexcept { return bit_depth_origin_; }

  /// Row-major intensity buffer, size width*height.
  std::span<const double> data() const noexcept { return data_; }
  double value(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  std::size_t pixel_count() const noexcept { return data_.size(); }

 private:
  int width_;
  int height_;
  std::vector<double> data_;
  double max_value_;
  int bit_depth_origin_;
};

/// Reference/candidate pair with guaranteed matching geometry and range.
/// Construct through validate_pair.
class ImagePair {
 public:
  const GrayImage& reference() const noexcept { return reference_; }
  const GrayImage& candidate() const noexcept { return candidate_; }
  const std::string& pair_id() const noexcept { return pair_id_; }

  friend ImagePair validate_pair(GrayImage reference, GrayImage candidate, std::string pair_id);

 private:
  ImagePair(GrayImage reference, GrayImage candidate, std::string pair_id)
      : reference_(std::move(reference)),
        candidate_(std::move(candidate)),
        pair_id_(std::move(pair_id)) {}

  GrayImage reference_;
  GrayImage candidate_;
  std::string pair_id_;
};

/// Fails with DimensionMismatch / RangeMismatch instead of producing an
/// inconsistent pair.
ImagePair validate_pair(GrayImage reference, GrayImage candidate, std::string pair_id = "");

/// N x D matrix of extractor outputs for one image set.
class FeatureMatrix {
 public:
  FeatureMatrix(Eigen::MatrixXf rows, std::string extractor_id);

  std::int64_t n() const noexcept { return rows_.rows(); }
  std::int64_t d() const noexcept { return rows_.cols(); }
  const Eigen::MatrixXf& rows() const noexcept { return rows_; }
  const std::string& extractor_id() const noexcept { return extractor_id_; }

 private:
  Eigen::MatrixXf rows_;
  std::string extractor_id_;
};

/// Mean vector and covariance matrix fitted to a FeatureMatrix.
class GaussianStats {
 public:
  GaussianStats(Eigen::VectorXd mean, Eigen::MatrixXd cov, std::int64_t n_samples);

  std::int64_t dim() const noexcept { return mean_.size(); }
  const Eigen::VectorXd& mean() const noexcept { return mean_; }
  const Eigen::MatrixXd& cov() const noexcept { return cov_; }
  std::int64_t n_samples() const noexcept { return n_samples_; }

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
  std::int64_t n_samples_;
};

enum class Direction { LowerIsBetter, HigherIsBetter };

const char* to_string(Direction direction);
Direction parse_direction(const std::string& text);

/// One named metric series over the table's checkpoints; entries may be
/// missing, but a column must carry at least two present values.
struct MetricColumn {
  std::string name;
  Direction direction = Direction::LowerIsBetter;
  std::vector<std::optional<double>> values;
};

/// Per-checkpoint rows of named metric values, input to SAMe.
class MetricTable {
 public:
  MetricTable(std::vector<std::string> checkpoints, std::vector<MetricColumn> columns);

  const std::vector<std::string>& checkpoints() const noexcept { return checkpoints_; }
  const std::vector<MetricColumn>& columns() const noexcept { return columns_; }
  const MetricColumn* find_column(const std::string& name) const;

 private:
  std::vector<std::string> checkpoints_;
  std::vector<MetricColumn> columns_;
};

/// 3-D binary labeling for Dice scoring. Voxels are strictly 0 or 1.
class VoxelMask {
 public:
  VoxelMask(int nx, int ny, int nz, std::vector<std::uint8_t> data,
            std::optional<std::array<double, 3>> spacing_mm = std::nullopt);

  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  int nz() const noexcept { return nz_; }
  const std::vector<std::uint8_t>& data() const noexcept { return data_; }
  const std::optional<std::array<double, 3>>& spacing_mm() const noexcept { return spacing_mm_; }

  std::size_t voxel_count() const noexcept { return data_.size(); }
  std::size_t set_count() const;
  bool same_dims(const VoxelMask& other) const noexcept {
    return nx_ == other.nx_ && ny_ == other.ny_ && nz_ == other.nz_;
  }

 private:
  int nx_, ny_, nz_;
  std::vector<std::uint8_t> data_;
  std::optional<std::array<double, 3>> spacing_mm_;
};

/// 3-D scalar grid produced by stacking slices (axial index last).
class ScalarVolume {
 public:
  ScalarVolume(int nx, int ny, int nz, std::vector<double> data, double max_value,
               int bit_depth_origin);

  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  int nz() const noexcept { return nz_; }
  double max_value() const noexcept { return max_value_; }
  int bit_depth_origin() const noexcept { return bit_depth_origin_; }
  std::span<const double> data() const noexcept { return data_; }
  std::span<const double> slice(int z) const;

 private:
  int nx_, ny_, nz_;
  std::vector<double> data_;
  double max_value_;
  int bit_depth_origin_;
};

/// Aggregate of one metric over a dataset: mean, sample std (when n >= 2),
/// and the pair count it was computed from.
class MetricValue {
 public:
  MetricValue(std::string name, double mean, std::optional<double> std_dev, std::int64_t n_pairs);

  const std::string& name() const noexcept { return name_; }
  double mean() const noexcept { return mean_; }
  const std::optional<double>& std_dev() const noexcept { return std_dev_; }
  std::int64_t n_pairs() const noexcept { return n_pairs_; }

 private:
  std::string name_;
  double mean_;
  std::optional<double> std_dev_;
  std::int64_t n_pairs_;
};

}  // namespace sameval
