#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sameval/types.hpp"

namespace sameval::agg {

/// Column names aggregated by default when present in a table.
inline const std::vector<std::string> kDefaultSameColumns = {"SSIM", "MSE", "MAE", "FID_Img",
                                                             "FID_Rad"};

// Min-max scaling of one metric series: (v - min) / (max - min), then
// reversed as 1 - scaled for higher-is-better metrics so 0 always marks the
// best checkpoint. A constant series carries no ranking information and
// raises DegenerateColumn.
std::vector<double> scale_column(std::span<const double> values, Direction direction);

struct SameResult {
  std::vector<std::string> checkpoints;
  std::vector<std::string> included_columns;
  std::vector<std::string> excluded_columns;     // degenerate, dropped with a warning
  std::vector<std::vector<double>> scaled;       // one series per included column
  std::vector<double> same_values;               // per-checkpoint aggregate
  std::string selected;
  bool tie = false;                              // selection was a tie, earliest won
};

// Scales every included column and averages them per checkpoint. The
// scaling population is exactly the checkpoints of this table; callers
// decide which epochs compete. Columns must be complete (MissingValues
// otherwise). `include` defaults to the canonical five above when any of
// them are present, else to every column.
SameResult compute_same(const MetricTable& table,
                        const std::optional<std::vector<std::string>>& include = std::nullopt);

/// Label of the minimum SAMe value; exact ties break to the earliest
/// checkpoint in table order.
std::string select_checkpoint(const SameResult& result);

}  // namespace sameval::agg
