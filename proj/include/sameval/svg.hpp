#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace sameval::report {

struct Series {
  std::string label;
  std::vector<double> values;
};

// Static SVG line chart: checkpoints on x, values on y, one polyline per
// series with a legend. Everything is computed up front; the file has no
// scripting.
void write_line_chart(const std::filesystem::path& path, const std::string& title,
                      const std::vector<std::string>& x_labels, const std::vector<Series>& series,
                      const std::string& y_label);

}  // namespace sameval::report
