#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace sameval {

/// Number of workers used when a caller passes jobs <= 0.
int hardware_jobs();

// Runs fn(i) for every i in [0, n). Each index writes only its own outputs,
// so results are independent of the worker count and of scheduling.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

// Fixed-shape pairwise summation: the reduction tree depends only on n,
// never on how the values were produced. Use this wherever a mean must be
// bit-identical across worker counts.
double pairwise_sum(std::span<const double> values);

// Combines parts[0..k) pairwise in index order until one remains. The
// combine order is a pure function of k, so block-parallel accumulations
// stay deterministic as long as the block boundaries are fixed.
template <typename T, typename Combine>
T tree_combine(std::vector<T> parts, Combine combine) {
  while (parts.size() > 1) {
    std::vector<T> next;
    next.reserve((parts.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2) {
      next.push_back(combine(std::move(parts[i]), std::move(parts[i + 1])));
    }
    if (parts.size() % 2 == 1) next.push_back(std::move(parts.back()));
    parts = std::move(next);
  }
  return std::move(parts.front());
}

}  // namespace sameval
