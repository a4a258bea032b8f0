#include "sameval/frechet.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "sameval/log.hpp"
#include "sameval/parallel.hpp"

namespace sameval::dist {

namespace {

// Rows per accumulation block. Fixed (never derived from the worker count)
// so the reduction tree, and therefore every bit of the result, is the same
// no matter how many threads run.
constexpr std::int64_t kRowBlock = 512;

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) {
  return (m + m.transpose()) * 0.5;
}

double relative_asymmetry(const Eigen::MatrixXd& m) {
  const double scale = m.norm();
  if (scale == 0.0) return 0.0;
  return (m - m.transpose()).norm() / scale;
}

Eigen::MatrixXd sqrtm_eigen(const Eigen::MatrixXd& sym, const FrechetConfig& config) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) {
    raise(ErrorKind::ConvergenceFailure, "eigendecomposition did not converge");
  }
  Eigen::VectorXd eigenvalues = solver.eigenvalues();
  const double lambda_max = eigenvalues.maxCoeff();
  const double lambda_min = eigenvalues.minCoeff();
  if (lambda_max > 0.0 && lambda_min > 0.0 &&
      lambda_max / lambda_min > config.max_condition_warn) {
    log_warn("matrix condition estimate " + std::to_string(lambda_max / lambda_min) +
             " exceeds max_condition_warn");
  }
  Eigen::VectorXd roots(eigenvalues.size());
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    roots[i] = std::sqrt(std::max(eigenvalues[i], 0.0));
  }
  Eigen::MatrixXd s = solver.eigenvectors() * roots.asDiagonal() * solver.eigenvectors().transpose();
  return symmetrize(s);
}

Eigen::MatrixXd sqrtm_newton_schulz(const Eigen::MatrixXd& sym) {
  const double norm = sym.norm();
  if (norm == 0.0) return Eigen::MatrixXd::Zero(sym.rows(), sym.cols());
  const Eigen::Index d = sym.rows();
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(d, d);

  // Scale so the spectrum sits in (0, 1]; the coupled iteration then
  // converges quadratically for positive definite input.
  Eigen::MatrixXd y = sym / norm;
  Eigen::MatrixXd z = identity;
  constexpr int kMaxIterations = 100;
  for (int it = 0; it < kMaxIterations; ++it) {
    const Eigen::MatrixXd zy = z * y;
    if ((zy - identity).norm() <= 1e-13 * static_cast<double>(d)) break;
    const Eigen::MatrixXd t = 0.5 * (3.0 * identity - zy);
    y = y * t;
    z = t * z;
  }
  return symmetrize(y * std::sqrt(norm));
}

}  // namespace

void FrechetConfig::validate() const {
  if (!(eps_regularization >= 0.0)) {
    raise(ErrorKind::InvalidArgument, "eps_regularization must be >= 0");
  }
  if (!(relative_zero_tolerance >= 0.0)) {
    raise(ErrorKind::InvalidArgument, "relative_zero_tolerance must be >= 0");
  }
}

GaussianStats fit_gaussian(const FeatureMatrix& features, int jobs) {
  const std::int64_t n = features.n();
  const std::int64_t d = features.d();
  if (n < 2) {
    raise(ErrorKind::TooFewSamples,
          "Gaussian fit needs at least 2 samples, got " + std::to_string(n));
  }
  if (d > n) {
    log_warn("fitting " + std::to_string(d) + "-dim Gaussian from only " + std::to_string(n) +
             " samples: covariance is rank-deficient");
  }

  const Eigen::MatrixXd x = features.rows().cast<double>();
  const std::size_t blocks = static_cast<std::size_t>((n + kRowBlock - 1) / kRowBlock);

  auto block_range = [&](std::size_t b) {
    const std::int64_t begin = static_cast<std::int64_t>(b) * kRowBlock;
    const std::int64_t rows = std::min(kRowBlock, n - begin);
    return std::pair<std::int64_t, std::int64_t>(begin, rows);
  };

  std::vector<Eigen::RowVectorXd> sums(blocks);
  parallel_for(blocks, jobs, [&](std::size_t b) {
    const auto [begin, rows] = block_range(b);
    sums[b] = x.middleRows(begin, rows).colwise().sum();
  });
  Eigen::RowVectorXd total = tree_combine(
      std::move(sums), [](Eigen::RowVectorXd a, const Eigen::RowVectorXd& b) {
        a += b;
        return a;
      });
  const Eigen::RowVectorXd mean = total / static_cast<double>(n);

  std::vector<Eigen::MatrixXd> partials(blocks);
  parallel_for(blocks, jobs, [&](std::size_t b) {
    const auto [begin, rows] = block_range(b);
    const Eigen::MatrixXd centered = x.middleRows(begin, rows).rowwise() - mean;
    partials[b].noalias() = centered.transpose() * centered;
  });
  Eigen::MatrixXd scatter = tree_combine(
      std::move(partials), [](Eigen::MatrixXd a, const Eigen::MatrixXd& b) {
        a += b;
        return a;
      });

  Eigen::MatrixXd cov = symmetrize(scatter / static_cast<double>(n - 1));
  return GaussianStats(mean.transpose(), std::move(cov), n);
}

Eigen::MatrixXd sqrtm_psd(const Eigen::MatrixXd& m, const FrechetConfig& config) {
  config.validate();
  if (m.rows() != m.cols()) raise(ErrorKind::InvalidArgument, "matrix square root needs a square matrix");
  if (m.size() == 0) raise(ErrorKind::InvalidArgument, "empty matrix");
  const double asym = relative_asymmetry(m);
  if (asym > 1e-6) {
    raise(ErrorKind::NotSymmetric,
          "relative asymmetry " + std::to_string(asym) + " exceeds 1e-6");
  }

  const Eigen::MatrixXd sym = symmetrize(m);
  Eigen::MatrixXd root = config.sqrt_method == SqrtMethod::Eigendecomposition
                             ? sqrtm_eigen(sym, config)
                             : sqrtm_newton_schulz(sym);

  const double scale = sym.norm();
  const double residual = (root * root - sym).norm();
  if (scale > 0.0 && residual / scale > 1e-6) {
    raise(ErrorKind::ConvergenceFailure,
          "S*S relative residual " + std::to_string(residual / scale) + " exceeds 1e-6");
  }
  return root;
}

namespace {

double frechet_attempt(const Eigen::VectorXd& mean_diff, const Eigen::MatrixXd& cov_x,
                       const Eigen::MatrixXd& cov_y, const FrechetConfig& config) {
  const Eigen::MatrixXd root_x = sqrtm_psd(cov_x, config);
  Eigen::MatrixXd inner = root_x * cov_y * root_x;
  const double inner_asym = relative_asymmetry(inner);
  if (inner_asym > 1e-6) {
    raise(ErrorKind::NumericalInstability,
          "cross-term asymmetry " + std::to_string(inner_asym) + " exceeds 1e-6");
  }
  const Eigen::MatrixXd cross = sqrtm_psd(symmetrize(inner), config);
  return mean_diff.squaredNorm() + cov_x.trace() + cov_y.trace() - 2.0 * cross.trace();
}

}  // namespace

double frechet_distance(const GaussianStats& gx, const GaussianStats& gy,
                        const FrechetConfig& config) {
  config.validate();
  if (gx.dim() != gy.dim()) {
    raise(ErrorKind::DimensionMismatch, "Gaussians have dimensions " + std::to_string(gx.dim()) +
                                            " and " + std::to_string(gy.dim()));
  }

  const Eigen::VectorXd mean_diff = gx.mean() - gy.mean();
  double raw;
  try {
    raw = frechet_attempt(mean_diff, gx.cov(), gy.cov(), config);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NumericalInstability && e.kind() != ErrorKind::ConvergenceFailure) {
      throw;
    }
    if (config.eps_regularization <= 0.0) {
      raise(ErrorKind::NumericalInstability,
            std::string("cross term failed and eps_regularization is disabled: ") + e.what());
    }
    log_warn(std::string("retrying Fréchet cross term with eps-regularized diagonals: ") +
             e.what());
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(gx.dim(), gx.dim());
    try {
      raw = frechet_attempt(mean_diff, gx.cov() + config.eps_regularization * eye,
                            gy.cov() + config.eps_regularization * eye, config);
    } catch (const Error& retry_error) {
      raise(ErrorKind::NumericalInstability,
            std::string("cross term failed after eps-regularization retry: ") +
                retry_error.what());
    }
  }

  // A distance this small relative to the inputs is numerical residue;
  // identical Gaussians must come out at exactly 0.
  const double problem_scale =
      mean_diff.squaredNorm() + std::abs(gx.cov().trace()) + std::abs(gy.cov().trace());
  if (raw < 0.0) {
    log_info("clamping negative Fréchet residue " + std::to_string(raw) + " to 0");
  }
  if (raw < config.relative_zero_tolerance * problem_scale) return 0.0;
  return raw;
}

FidResult fid(const FeatureMatrix& real_features, const FeatureMatrix& syn_features,
              const FrechetConfig& config, int jobs) {
  if (real_features.extractor_id() != syn_features.extractor_id()) {
    raise(ErrorKind::ExtractorMismatch, "feature sets come from extractors '" +
                                            real_features.extractor_id() + "' and '" +
                                            syn_features.extractor_id() + "'");
  }
  if (real_features.d() != syn_features.d()) {
    raise(ErrorKind::DimensionMismatch, "feature dimensions differ");
  }
  const GaussianStats gx = fit_gaussian(real_features, jobs);
  const GaussianStats gy = fit_gaussian(syn_features, jobs);
  FidResult result;
  result.value = frechet_distance(gx, gy, config);
  result.extractor_id = real_features.extractor_id();
  result.n_real = real_features.n();
  result.n_syn = syn_features.n();
  return result;
}

double split_variability(const FeatureMatrix& features, std::uint64_t seed,
                         std::span<const std::string> group_ids, const FrechetConfig& config) {
  if (static_cast<std::int64_t>(group_ids.size()) != features.n()) {
    raise(ErrorKind::InvalidArgument, "need one group id per feature row");
  }

  std::map<std::string, std::vector<Eigen::Index>> groups;
  for (std::size_t i = 0; i < group_ids.size(); ++i) {
    groups[group_ids[i]].push_back(static_cast<Eigen::Index>(i));
  }
  if (groups.size() < 4) {
    raise(ErrorKind::TooFewGroups,
          "split variability needs >= 4 distinct groups, got " + std::to_string(groups.size()));
  }

  std::vector<std::string> order;
  order.reserve(groups.size());
  for (const auto& [id, rows] : groups) order.push_back(id);

  // Hand-rolled Fisher-Yates: std::shuffle's draw sequence is
  // implementation-defined, this is reproducible everywhere.
  std::mt19937_64 rng(seed);
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
    std::swap(order[i], order[j]);
  }

  const std::size_t half = (order.size() + 1) / 2;
  auto gather = [&](std::size_t begin, std::size_t end) {
    std::vector<Eigen::Index> rows;
    for (std::size_t g = begin; g < end; ++g) {
      const auto& members = groups[order[g]];
      rows.insert(rows.end(), members.begin(), members.end());
    }
    std::sort(rows.begin(), rows.end());
    Eigen::MatrixXf sub(static_cast<Eigen::Index>(rows.size()), features.d());
    for (std::size_t r = 0; r < rows.size(); ++r) sub.row(static_cast<Eigen::Index>(r)) = features.rows().row(rows[r]);
    return FeatureMatrix(std::move(sub), features.extractor_id());
  };

  const FeatureMatrix first = gather(0, half);
  const FeatureMatrix second = gather(half, order.size());
  return fid(first, second, config).value;
}

}  // namespace sameval::dist
