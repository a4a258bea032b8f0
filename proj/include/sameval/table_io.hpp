#pragma once

#include <filesystem>

#include "sameval/same.hpp"
#include "sameval/types.hpp"

namespace sameval::agg {

// MetricTable on disk, either JSON
//   {"checkpoints": [...],
//    "columns": [{"name": ..., "direction": "lower"|"higher", "values": [...]}]}
// (null marks a missing value) or CSV with a directions header row:
//   checkpoint,FID_Img,SSIM
//   direction,lower,higher
//   10,15.047,0.701
// Empty CSV cells mark missing values.
MetricTable read_metric_table(const std::filesystem::path& path);
MetricTable read_metric_table_json(const std::filesystem::path& path);
MetricTable read_metric_table_csv(const std::filesystem::path& path);
void write_metric_table_json(const MetricTable& table, const std::filesystem::path& path);

void write_same_result_json(const SameResult& result, const std::filesystem::path& path);

}  // namespace sameval::agg
