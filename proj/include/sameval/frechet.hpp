#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <string>

#include "sameval/types.hpp"

namespace sameval::dist {

enum class SqrtMethod { Eigendecomposition, NewtonSchulz };

/// Numerical policy for the Fréchet distance.
struct FrechetConfig {
  // Added to covariance diagonals once, on numerical failure, then retried.
  double eps_regularization = 1e-6;
  SqrtMethod sqrt_method = SqrtMethod::Eigendecomposition;
  // Condition estimate above this logs a warning.
  double max_condition_warn = 1e12;
  // Distances below this fraction of the problem scale collapse to exactly
  // 0; identical inputs must score 0, not a float residue of either sign.
  double relative_zero_tolerance = 1e-9;

  void validate() const;
};

// Column means and unbiased (n-1) sample covariance, symmetrized as
// (C + C^T)/2. Accumulation runs over fixed-size row blocks combined in a
// fixed tree, so the result is bit-identical for any worker count.
GaussianStats fit_gaussian(const FeatureMatrix& features, int jobs = 0);

// Symmetric PSD square root: eigenvalues below 0 clamp to 0 before the
// root. Verifies S*S = m to 1e-6 relative Frobenius and raises
// ConvergenceFailure otherwise (NotSymmetric for asymmetric input).
Eigen::MatrixXd sqrtm_psd(const Eigen::MatrixXd& m, const FrechetConfig& config = {});

// ||mu_x - mu_y||^2 + tr(Sx + Sy - 2*(Sx Sy)^{1/2}), with the cross term
// evaluated through the symmetric form (Sx^{1/2} Sy Sx^{1/2})^{1/2}.
double frechet_distance(const GaussianStats& gx, const GaussianStats& gy,
                        const FrechetConfig& config = {});

struct FidResult {
  double value = 0.0;
  std::string extractor_id;
  std::int64_t n_real = 0;
  std::int64_t n_syn = 0;
};

/// Fréchet feature distance between two sets extracted by the same profile.
FidResult fid(const FeatureMatrix& real_features, const FeatureMatrix& syn_features,
              const FrechetConfig& config = {}, int jobs = 0);

// Splits groups (not rows) into two halves with a seeded shuffle and
// returns the fid between the halves. Deterministic for a fixed seed.
double split_variability(const FeatureMatrix& features, std::uint64_t seed,
                         std::span<const std::string> group_ids,
                         const FrechetConfig& config = {});

}  // namespace sameval::dist
