#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ssr {

enum class PlotKind { line_by_epsilon, line_by_n };

PlotKind plot_kind_from_string(std::string_view text);

/// Parsed experiment CSV. Comment lines starting with '#' are dropped.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

CsvTable parse_csv(std::string_view text);

/// SVG line chart: x from the swept column ("n" for line_by_n; "epsilon", "a" or
/// "instance_id" for line_by_epsilon), one line per numeric column with the mean
/// over rows sharing x and a +/-1 standard error band. A "diff" column gets its own panel.
std::string render_plot(std::string_view csv_text, PlotKind kind);

void emit_plot(const std::filesystem::path& csv_path, PlotKind kind, const std::filesystem::path& out_path);

}  // namespace ssr
