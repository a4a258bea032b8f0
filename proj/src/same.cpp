#include "sameval/same.hpp"

#include <algorithm>
#include <cmath>

#include "sameval/log.hpp"

namespace sameval::agg {

std::vector<double> scale_column(std::span<const double> values, Direction direction) {
  if (values.size() < 2) {
    raise(ErrorKind::TooFewValues, "min-max scaling needs at least 2 values");
  }
  double lo = values[0], hi = values[0];
  for (double v : values) {
    if (!std::isfinite(v)) raise(ErrorKind::InvalidArgument, "cannot scale non-finite value");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (lo == hi) {
    raise(ErrorKind::DegenerateColumn, "all values equal (" + std::to_string(lo) +
                                           "), min-max range is zero");
  }
  const double range = hi - lo;
  std::vector<double> scaled(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double s = (values[i] - lo) / range;
    scaled[i] = direction == Direction::HigherIsBetter ? 1.0 - s : s;
  }
  return scaled;
}

SameResult compute_same(const MetricTable& table,
                        const std::optional<std::vector<std::string>>& include) {
  // Which columns compete: an explicit list wins; otherwise the canonical
  // five when any of them exist, otherwise everything.
  std::vector<std::string> wanted;
  if (include.has_value()) {
    wanted = *include;
  } else {
    for (const auto& name : kDefaultSameColumns) {
      if (table.find_column(name) != nullptr) wanted.push_back(name);
    }
    if (wanted.empty()) {
      for (const auto& column : table.columns()) wanted.push_back(column.name);
    }
  }
  if (wanted.empty()) raise(ErrorKind::InvalidArgument, "no columns selected for SAMe");

  SameResult result;
  result.checkpoints = table.checkpoints();
  const std::size_t n = result.checkpoints.size();

  for (const auto& name : wanted) {
    const MetricColumn* column = table.find_column(name);
    if (column == nullptr) {
      raise(ErrorKind::MissingValues, "table has no column named '" + name + "'");
    }
    std::vector<double> values;
    values.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!column->values[i].has_value()) {
        raise(ErrorKind::MissingValues, "column '" + name + "' is missing checkpoint '" +
                                            result.checkpoints[i] + "'");
      }
      values.push_back(*column->values[i]);
    }
    try {
      result.scaled.push_back(scale_column(values, column->direction));
      result.included_columns.push_back(name);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegenerateColumn) throw;
      log_warn("dropping constant column '" + name + "' from SAMe: " + e.what());
      result.excluded_columns.push_back(name);
    }
  }
  if (result.included_columns.empty()) {
    raise(ErrorKind::DegenerateColumn, "every selected column is constant");
  }

  result.same_values.resize(n);
  const double k = static_cast<double>(result.scaled.size());
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (const auto& series : result.scaled) sum += series[i];
    result.same_values[i] = sum / k;
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (result.same_values[i] < result.same_values[best]) best = i;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (i != best && result.same_values[i] == result.same_values[best]) result.tie = true;
  }
  result.selected = result.checkpoints[best];
  return result;
}

std::string select_checkpoint(const SameResult& result) {
  if (result.same_values.empty() || result.checkpoints.size() != result.same_values.size()) {
    raise(ErrorKind::EmptyInput, "result has no aggregate values to select from");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < result.same_values.size(); ++i) {
    // strict '<' keeps the earliest checkpoint on exact ties
    if (result.same_values[i] < result.same_values[best]) best = i;
  }
  return result.checkpoints[best];
}

}  // namespace sameval::agg
