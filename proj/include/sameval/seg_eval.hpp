#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sameval/types.hpp"

namespace sameval::seg {

// 2|P∩T| / (|P|+|T|). Two empty masks agree vacuously and score 1;
// empty vs nonempty scores 0. Pure integer counting.
double dice(const VoxelMask& prediction, const VoxelMask& truth);

enum class TrainDomain {
  RealPre,
  RealPrePlusSynPost,
  SynPost,
  RealPost,
  RealPostPlusSynPost,
  RealPostPlusRealPre,
  RealPostPlusRealPrePlusSynPost,
};

enum class TestDomain { RealPre, RealPost };

const char* to_string(TrainDomain d);
const char* to_string(TestDomain d);
TrainDomain parse_train_domain(const std::string& text);
TestDomain parse_test_domain(const std::string& text);

struct ExperimentRecord {
  std::string case_id;
  TrainDomain train_domain;
  TestDomain test_domain;
  double dice = 0.0;
};

void validate(const ExperimentRecord& record);

struct ExperimentCell {
  TrainDomain train_domain;
  TestDomain test_domain;
  double mean_dice = 0.0;
  std::int64_t n_cases = 0;
};

// Mean Dice per (train_domain, test_domain) cell with case counts, ordered
// as the four canonical experiment blocks: pre->pre, pre->post, post->post,
// post->pre; any other combination follows in a stable order.
std::vector<ExperimentCell> aggregate_experiments(std::span<const ExperimentRecord> records);

// Records CSV: "case_id,train_domain,test_domain,dice" header, UTF-8, LF.
std::vector<ExperimentRecord> read_records_csv(const std::filesystem::path& path);
void write_records_csv(std::span<const ExperimentRecord> records,
                       const std::filesystem::path& path);
void write_cells_csv(std::span<const ExperimentCell> cells, const std::filesystem::path& path);

}  // namespace sameval::seg
