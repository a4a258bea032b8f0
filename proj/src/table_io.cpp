#include "sameval/table_io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace sameval::agg {

namespace {

using nlohmann::json;

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::IoError, "cannot open '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    raise(ErrorKind::FormatError, "invalid JSON in '" + path.string() + "': " + e.what());
  }
  return j;
}

void dump_json(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) raise(ErrorKind::IoError, "cannot open '" + path.string() + "' for writing");
  out << j.dump(2) << "\n";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

MetricTable read_metric_table(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".json") return read_metric_table_json(path);
  if (ext == ".csv") return read_metric_table_csv(path);
  raise(ErrorKind::FormatError,
        "metric table must be .json or .csv, got '" + path.string() + "'");
}

MetricTable read_metric_table_json(const std::filesystem::path& path) {
  const json j = load_json(path);
  if (!j.contains("checkpoints") || !j.contains("columns")) {
    raise(ErrorKind::FormatError, "metric table JSON needs 'checkpoints' and 'columns'");
  }
  std::vector<std::string> checkpoints;
  for (const auto& c : j.at("checkpoints")) {
    checkpoints.push_back(c.is_string() ? c.get<std::string>() : c.dump());
  }
  std::vector<MetricColumn> columns;
  for (const auto& jc : j.at("columns")) {
    MetricColumn column;
    column.name = jc.at("name").get<std::string>();
    column.direction = parse_direction(jc.at("direction").get<std::string>());
    for (const auto& v : jc.at("values")) {
      if (v.is_null()) {
        column.values.emplace_back(std::nullopt);
      } else {
        column.values.emplace_back(v.get<double>());
      }
    }
    columns.push_back(std::move(column));
  }
  return MetricTable(std::move(checkpoints), std::move(columns));
}

MetricTable read_metric_table_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::IoError, "cannot open '" + path.string() + "'");

  std::string line;
  if (!std::getline(in, line)) raise(ErrorKind::FormatError, "empty metric table CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_csv_line(line);
  if (header.size() < 2 || header[0] != "checkpoint") {
    raise(ErrorKind::FormatError, "metric table CSV must start with a 'checkpoint' header");
  }

  if (!std::getline(in, line)) raise(ErrorKind::FormatError, "missing directions row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto directions = split_csv_line(line);
  if (directions.size() != header.size() || directions[0] != "direction") {
    raise(ErrorKind::FormatError, "second CSV row must be 'direction,<lower|higher>,...'");
  }

  std::vector<MetricColumn> columns(header.size() - 1);
  for (std::size_t c = 1; c < header.size(); ++c) {
    columns[c - 1].name = header[c];
    columns[c - 1].direction = parse_direction(directions[c]);
  }

  std::vector<std::string> checkpoints;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      raise(ErrorKind::FormatError, "CSV row has " + std::to_string(fields.size()) +
                                        " fields, header has " + std::to_string(header.size()));
    }
    checkpoints.push_back(fields[0]);
    for (std::size_t c = 1; c < fields.size(); ++c) {
      if (fields[c].empty()) {
        columns[c - 1].values.emplace_back(std::nullopt);
      } else {
        try {
          columns[c - 1].values.emplace_back(std::stod(fields[c]));
        } catch (const std::exception&) {
          raise(ErrorKind::FormatError, "cannot parse '" + fields[c] + "' as a number");
        }
      }
    }
  }
  return MetricTable(std::move(checkpoints), std::move(columns));
}

void write_metric_table_json(const MetricTable& table, const std::filesystem::path& path) {
  json j;
  j["checkpoints"] = table.checkpoints();
  j["columns"] = json::array();
  for (const auto& column : table.columns()) {
    json jc;
    jc["name"] = column.name;
    jc["direction"] = to_string(column.direction);
    json values = json::array();
    for (const auto& v : column.values) {
      if (v.has_value()) values.push_back(*v);
      else values.push_back(nullptr);
    }
    jc["values"] = std::move(values);
    j["columns"].push_back(std::move(jc));
  }
  dump_json(j, path);
}

void write_same_result_json(const SameResult& result, const std::filesystem::path& path) {
  json j;
  j["checkpoints"] = result.checkpoints;
  j["included_columns"] = result.included_columns;
  j["excluded_columns"] = result.excluded_columns;
  json scaled = json::object();
  for (std::size_t i = 0; i < result.included_columns.size(); ++i) {
    scaled[result.included_columns[i]] = result.scaled[i];
  }
  j["scaled"] = std::move(scaled);
  j["same_values"] = result.same_values;
  j["selected"] = result.selected;
  j["tie"] = result.tie;
  dump_json(j, path);
}

}  // namespace sameval::agg
