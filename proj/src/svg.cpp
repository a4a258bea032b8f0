#include "sameval/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sameval/error.hpp"

namespace sameval::report {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

}  // namespace

void write_line_chart(const std::filesystem::path& path, const std::string& title,
                      const std::vector<std::string>& x_labels, const std::vector<Series>& series,
                      const std::string& y_label) {
  if (x_labels.empty() || series.empty()) {
    raise(ErrorKind::InvalidArgument, "chart needs at least one x position and one series");
  }
  for (const auto& s : series) {
    if (s.values.size() != x_labels.size()) {
      raise(ErrorKind::InvalidArgument, "series '" + s.label + "' length does not match x labels");
    }
  }

  double lo = series[0].values[0], hi = lo;
  for (const auto& s : series) {
    for (double v : s.values) {
      if (!std::isfinite(v)) raise(ErrorKind::InvalidArgument, "chart values must be finite");
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }

  const double width = 720, height = 420;
  const double left = 70, right = 150, top = 50, bottom = 50;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  const auto n = x_labels.size();

  auto x_at = [&](std::size_t i) {
    return n == 1 ? left + plot_w / 2
                  : left + plot_w * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  auto y_at = [&](double v) { return top + plot_h * (1.0 - (v - lo) / (hi - lo)); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\""
      << " font-size=\"16\">" << escape(title) << "</text>\n";

  // axes
  svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
      << top + plot_h << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
      << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"18\" y=\"" << top + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 18 "
      << top + plot_h / 2 << ")\">" << escape(y_label) << "</text>\n";

  // y ticks
  for (int t = 0; t <= 4; ++t) {
    const double v = lo + (hi - lo) * t / 4.0;
    const double y = y_at(v);
    svg << "<line x1=\"" << left - 4 << "\" y1=\"" << y << "\" x2=\"" << left << "\" y2=\"" << y
        << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << left - 8 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(v)
        << "</text>\n";
    if (t > 0) {
      svg << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << left + plot_w << "\" y2=\""
          << y << "\" stroke=\"#dddddd\"/>\n";
    }
  }

  // x ticks
  for (std::size_t i = 0; i < n; ++i) {
    const double x = x_at(i);
    svg << "<line x1=\"" << x << "\" y1=\"" << top + plot_h << "\" x2=\"" << x << "\" y2=\""
        << top + plot_h + 4 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << x << "\" y=\"" << top + plot_h + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << escape(x_labels[i]) << "</text>\n";
  }

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < n; ++i) {
      svg << x_at(i) << "," << y_at(series[s].values[i]) << " ";
    }
    svg << "\"/>\n";
    for (std::size_t i = 0; i < n; ++i) {
      svg << "<circle cx=\"" << x_at(i) << "\" cy=\"" << y_at(series[s].values[i])
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    const double ly = top + 16 + 18 * static_cast<double>(s);
    svg << "<line x1=\"" << left + plot_w + 12 << "\" y1=\"" << ly << "\" x2=\""
        << left + plot_w + 32 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << left + plot_w + 38 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(series[s].label)
        << "</text>\n";
  }
  svg << "</svg>\n";

  std::ofstream out(path, std::ios::trunc);
  if (!out) raise(ErrorKind::IoError, "cannot open '" + path.string() + "' for writing");
  out << svg.str();
}

}  // namespace sameval::report
