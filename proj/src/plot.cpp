#include "ssr/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "ssr/errors.hpp"

namespace ssr {

PlotKind plot_kind_from_string(std::string_view text) {
  if (text == "line_by_epsilon") return PlotKind::line_by_epsilon;
  if (text == "line_by_n") return PlotKind::line_by_n;
  throw ParseError("unknown plot kind '" + std::string(text) + "'");
}

namespace {

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::optional<double> parse_number(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  char* end = nullptr;
  const double value = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size() || !std::isfinite(value)) throw ParseError("non-numeric cell '" + cell + "'");
  return value;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct Point {
  double x = 0.0;
  double mean = 0.0;
  double se = 0.0;
};

struct Series {
  std::string name;
  std::vector<Point> points;
};

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void settle() {
    if (!(hi > lo)) {
      const double pad = lo == 0.0 ? 0.5 : 0.1 * std::abs(lo);
      lo -= pad;
      hi += pad;
    }
  }
};

Series summarize(const CsvTable& table, std::size_t x_col, std::size_t y_col) {
  std::map<double, std::vector<double>> groups;
  for (const auto& row : table.rows) {
    const auto x = parse_number(row[x_col]);
    if (!x) throw ParseError("empty cell in swept column '" + table.columns[x_col] + "'");
    auto& bucket = groups[*x];
    if (const auto y = parse_number(row[y_col])) bucket.push_back(*y);
  }
  Series series{table.columns[y_col], {}};
  for (const auto& [x, values] : groups) {
    if (values.empty()) continue;
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(values.size());
    double se = 0.0;
    if (values.size() > 1) {
      double sq = 0.0;
      for (double v : values) sq += (v - mean) * (v - mean);
      se = std::sqrt(sq / static_cast<double>(values.size() - 1) / static_cast<double>(values.size()));
    }
    series.points.push_back({x, mean, se});
  }
  return series;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

void draw_panel(std::ostringstream& svg, const std::vector<Series>& series, const std::string& x_name, double top,
                double height, const char* title, std::size_t color_offset) {
  constexpr double left = 70.0, width = 560.0;
  Range xr, yr;
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      xr.add(p.x);
      yr.add(p.mean - p.se);
      yr.add(p.mean + p.se);
    }
  }
  if (xr.lo > xr.hi) {
    xr = {0.0, 1.0};
    yr = {0.0, 1.0};
  }
  xr.settle();
  yr.settle();
  const auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * width; };
  const auto py = [&](double y) { return top + height - (y - yr.lo) / (yr.hi - yr.lo) * height; };
  svg << "<text x=\"" << num(left + width / 2) << "\" y=\"" << num(top - 8) << "\" text-anchor=\"middle\">" << title
      << "</text>\n";
  svg << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(width) << "\" height=\""
      << num(height) << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = xr.lo + (xr.hi - xr.lo) * t / 4.0;
    const double yv = yr.lo + (yr.hi - yr.lo) * t / 4.0;
    svg << "<text x=\"" << num(px(xv)) << "\" y=\"" << num(top + height + 16) << "\" text-anchor=\"middle\">"
        << label(xv) << "</text>\n";
    svg << "<text x=\"" << num(left - 6) << "\" y=\"" << num(py(yv) + 4) << "\" text-anchor=\"end\">" << label(yv)
        << "</text>\n";
    svg << "<line x1=\"" << num(left) << "\" y1=\"" << num(py(yv)) << "\" x2=\"" << num(left + width) << "\" y2=\""
        << num(py(yv)) << "\" stroke=\"#ddd\"/>\n";
  }
  svg << "<text x=\"" << num(left + width / 2) << "\" y=\"" << num(top + height + 34) << "\" text-anchor=\"middle\">"
      << x_name << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kPalette[(k + color_offset) % std::size(kPalette)];
    if (!s.points.empty()) {
      svg << "<polygon fill=\"" << color << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
      for (const auto& p : s.points) svg << num(px(p.x)) << ',' << num(py(p.mean + p.se)) << ' ';
      for (auto it = s.points.rbegin(); it != s.points.rend(); ++it) {
        svg << num(px(it->x)) << ',' << num(py(it->mean - it->se)) << ' ';
      }
      svg << "\"/>\n<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
      for (const auto& p : s.points) svg << num(px(p.x)) << ',' << num(py(p.mean)) << ' ';
      svg << "\"/>\n";
      for (const auto& p : s.points) {
        svg << "<circle cx=\"" << num(px(p.x)) << "\" cy=\"" << num(py(p.mean)) << "\" r=\"3\" fill=\"" << color
            << "\"/>\n";
      }
    }
    const double ly = top + 14 + 16.0 * static_cast<double>(k);
    svg << "<line x1=\"" << num(left + width + 10) << "\" y1=\"" << num(ly - 4) << "\" x2=\"" << num(left + width + 30)
        << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << num(left + width + 34) << "\" y=\"" << num(ly) << "\">" << s.name << "</text>\n";
  }
}

}  // namespace

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::size_t pos = 0;
  bool header = true;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    auto cells = split(line);
    if (header) {
      for (const auto& c : cells) {
        if (c.empty()) throw ParseError("empty column name");
      }
      table.columns = std::move(cells);
      header = false;
    } else {
      if (cells.size() != table.columns.size()) throw ParseError("row width does not match header");
      table.rows.push_back(std::move(cells));
    }
  }
  if (header) throw ParseError("CSV has no header");
  return table;
}

std::string render_plot(std::string_view csv_text, PlotKind kind) {
  const CsvTable table = parse_csv(csv_text);
  if (table.rows.empty()) throw ParseError("CSV has no data rows");
  std::optional<std::size_t> x_col;
  const std::vector<std::string> candidates =
      kind == PlotKind::line_by_n ? std::vector<std::string>{"n"} : std::vector<std::string>{"epsilon", "a", "instance_id"};
  for (const auto& name : candidates) {
    const auto it = std::find(table.columns.begin(), table.columns.end(), name);
    if (it != table.columns.end()) {
      x_col = static_cast<std::size_t>(it - table.columns.begin());
      break;
    }
  }
  if (!x_col) throw ParseError("CSV lacks the swept column for this plot kind");
  std::vector<Series> lines;
  std::optional<Series> diff;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    const auto& name = table.columns[c];
    if (c == *x_col || name == "seed") continue;
    const bool boolean = std::any_of(table.rows.begin(), table.rows.end(),
                                     [c](const auto& row) { return row[c] == "true" || row[c] == "false"; });
    if (boolean) {
      for (const auto& row : table.rows) {
        if (!row[c].empty() && row[c] != "true" && row[c] != "false") throw ParseError("mixed boolean column");
      }
      continue;
    }
    auto series = summarize(table, *x_col, c);
    if (name == "diff") {
      diff = std::move(series);
    } else {
      lines.push_back(std::move(series));
    }
  }
  if (lines.empty() && !diff) throw ParseError("CSV has no value columns");
  const double height = diff ? 640.0 : 420.0;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"760\" height=\"" << num(height)
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const std::string& x_name = table.columns[*x_col];
  draw_panel(svg, lines, x_name, 30.0, 320.0, "mean +/- 1 std err", 0);
  if (diff) draw_panel(svg, {*diff}, x_name, 440.0, 160.0, "difference", lines.size());
  svg << "</svg>\n";
  return svg.str();
}

void emit_plot(const std::filesystem::path& csv_path, PlotKind kind, const std::filesystem::path& out_path) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + csv_path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  const std::string svg = render_plot(text.str(), kind);
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + out_path.string() + "'");
  out << svg;
}

}  // namespace ssr
