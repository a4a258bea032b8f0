#include "sameval/seg_eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace sameval::seg {

double dice(const VoxelMask& prediction, const VoxelMask& truth) {
  if (!prediction.same_dims(truth)) {
    raise(ErrorKind::DimensionMismatch, "prediction and truth masks have different dims");
  }
  const auto& p = prediction.data();
  const auto& t = truth.data();
  std::size_t intersection = 0;
  std::size_t p_count = 0;
  std::size_t t_count = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    intersection += static_cast<std::size_t>(p[i] & t[i]);
    p_count += p[i];
    t_count += t[i];
  }
  if (p_count + t_count == 0) return 1.0;
  return 2.0 * static_cast<double>(intersection) / static_cast<double>(p_count + t_count);
}

const char* to_string(TrainDomain d) {
  switch (d) {
    case TrainDomain::RealPre: return "real_pre";
    case TrainDomain::RealPrePlusSynPost: return "real_pre_plus_syn_post";
    case TrainDomain::SynPost: return "syn_post";
    case TrainDomain::RealPost: return "real_post";
    case TrainDomain::RealPostPlusSynPost: return "real_post_plus_syn_post";
    case TrainDomain::RealPostPlusRealPre: return "real_post_plus_real_pre";
    case TrainDomain::RealPostPlusRealPrePlusSynPost:
      return "real_post_plus_real_pre_plus_syn_post";
  }
  return "?";
}

const char* to_string(TestDomain d) {
  return d == TestDomain::RealPre ? "real_pre" : "real_post";
}

TrainDomain parse_train_domain(const std::string& text) {
  static const std::map<std::string, TrainDomain> lookup = {
      {"real_pre", TrainDomain::RealPre},
      {"real_pre_plus_syn_post", TrainDomain::RealPrePlusSynPost},
      {"syn_post", TrainDomain::SynPost},
      {"real_post", TrainDomain::RealPost},
      {"real_post_plus_syn_post", TrainDomain::RealPostPlusSynPost},
      {"real_post_plus_real_pre", TrainDomain::RealPostPlusRealPre},
      {"real_post_plus_real_pre_plus_syn_post", TrainDomain::RealPostPlusRealPrePlusSynPost},
  };
  auto it = lookup.find(text);
  if (it == lookup.end()) raise(ErrorKind::FormatError, "unknown train domain '" + text + "'");
  return it->second;
}

TestDomain parse_test_domain(const std::string& text) {
  if (text == "real_pre") return TestDomain::RealPre;
  if (text == "real_post") return TestDomain::RealPost;
  raise(ErrorKind::FormatError, "unknown test domain '" + text + "'");
}

void validate(const ExperimentRecord& record) {
  if (record.case_id.empty()) raise(ErrorKind::InvalidArgument, "record needs a case_id");
  if (!std::isfinite(record.dice) || record.dice < 0.0 || record.dice > 1.0) {
    raise(ErrorKind::InvalidArgument,
          "dice " + std::to_string(record.dice) + " outside [0, 1]");
  }
}

std::vector<ExperimentCell> aggregate_experiments(std::span<const ExperimentRecord> records) {
  if (records.empty()) raise(ErrorKind::EmptyInput, "no experiment records");
  for (const auto& record : records) validate(record);

  // The four blocks: same-domain pre, pre->post shift, same-domain post,
  // post->pre shift; augmentation variants ordered within each block.
  static const std::vector<std::pair<TrainDomain, TestDomain>> canonical = {
      {TrainDomain::RealPre, TestDomain::RealPre},
      {TrainDomain::RealPrePlusSynPost, TestDomain::RealPre},
      {TrainDomain::SynPost, TestDomain::RealPre},
      {TrainDomain::RealPre, TestDomain::RealPost},
      {TrainDomain::RealPrePlusSynPost, TestDomain::RealPost},
      {TrainDomain::SynPost, TestDomain::RealPost},
      {TrainDomain::RealPost, TestDomain::RealPost},
      {TrainDomain::RealPostPlusSynPost, TestDomain::RealPost},
      {TrainDomain::RealPostPlusRealPre, TestDomain::RealPost},
      {TrainDomain::RealPostPlusRealPrePlusSynPost, TestDomain::RealPost},
      {TrainDomain::RealPost, TestDomain::RealPre},
      {TrainDomain::RealPostPlusSynPost, TestDomain::RealPre},
      {TrainDomain::RealPostPlusRealPrePlusSynPost, TestDomain::RealPre},
      {TrainDomain::RealPostPlusRealPre, TestDomain::RealPre},
  };

  std::map<std::pair<int, int>, std::pair<double, std::int64_t>> cells;
  for (const auto& record : records) {
    auto& cell = cells[{static_cast<int>(record.train_domain), static_cast<int>(record.test_domain)}];
    cell.first += record.dice;
    cell.second += 1;
  }

  std::vector<ExperimentCell> out;
  auto emit = [&](TrainDomain train, TestDomain test) {
    auto it = cells.find({static_cast<int>(train), static_cast<int>(test)});
    if (it == cells.end()) return;
    out.push_back({train, test, it->second.first / static_cast<double>(it->second.second),
                   it->second.second});
    cells.erase(it);
  };
  for (const auto& [train, test] : canonical) emit(train, test);
  // Anything not covered by the canonical layout, in enum order.
  while (!cells.empty()) {
    auto it = cells.begin();
    out.push_back({static_cast<TrainDomain>(it->first.first),
                   static_cast<TestDomain>(it->first.second),
                   it->second.first / static_cast<double>(it->second.second), it->second.second});
    cells.erase(it);
  }
  return out;
}

std::vector<ExperimentRecord> read_records_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::IoError, "cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) raise(ErrorKind::FormatError, "empty records CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "case_id,train_domain,test_domain,dice") {
    raise(ErrorKind::FormatError,
          "records CSV must start with 'case_id,train_domain,test_domain,dice'");
  }

  std::vector<ExperimentRecord> records;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string case_id, train, test, dice_text;
    if (!std::getline(ss, case_id, ',') || !std::getline(ss, train, ',') ||
        !std::getline(ss, test, ',') || !std::getline(ss, dice_text)) {
      raise(ErrorKind::FormatError, "malformed records row: " + line);
    }
    ExperimentRecord record;
    record.case_id = case_id;
    record.train_domain = parse_train_domain(train);
    record.test_domain = parse_test_domain(test);
    try {
      record.dice = std::stod(dice_text);
    } catch (const std::exception&) {
      raise(ErrorKind::FormatError, "cannot parse dice '" + dice_text + "'");
    }
    validate(record);
    records.push_back(std::move(record));
  }
  return records;
}

void write_records_csv(std::span<const ExperimentRecord> records,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) raise(ErrorKind::IoError, "cannot open '" + path.string() + "' for writing");
  out.precision(12);
  out << "case_id,train_domain,test_domain,dice\n";
  for (const auto& record : records) {
    validate(record);
    out << record.case_id << ',' << to_string(record.train_domain) << ','
        << to_string(record.test_domain) << ',' << record.dice << '\n';
  }
}

void write_cells_csv(std::span<const ExperimentCell> cells, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) raise(ErrorKind::IoError, "cannot open '" + path.string() + "' for writing");
  out.precision(12);
  out << "train_domain,test_domain,mean_dice,n_cases\n";
  for (const auto& cell : cells) {
    out << to_string(cell.train_domain) << ',' << to_string(cell.test_domain) << ','
        << cell.mean_dice << ',' << cell.n_cases << '\n';
  }
}

}  // namespace sameval::seg
