#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "ssr/errors.hpp"
#include "ssr/experiments.hpp"

namespace ssr {

namespace {

std::string hex_digest(std::uint64_t digest) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(digest));
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

}  // namespace

std::string render_csv(const RunRecord& record) {
  std::string out = "# config_digest: " + hex_digest(record.config_digest) + "\n";
  const auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) out += ',';
      out += cells[k];
    }
    out += '\n';
  };
  line(record.columns);
  for (const auto& row : record.rows) line(row);
  return out;
}

std::string render_meta(const RunRecord& record) {
  nlohmann::json skipped = nlohmann::json::array();
  for (const auto& [row, reason] : record.skipped) skipped.push_back({{"row", row}, {"reason", reason}});
  const nlohmann::json doc = {{"experiment", std::string(to_string(record.experiment))},
                              {"config_digest", hex_digest(record.config_digest)},
                              {"rows", record.rows.size()},
                              {"skipped", skipped},
                              {"wall_time", record.wall_time}};
  return doc.dump(2) + "\n";
}

std::filesystem::path write_record(const RunRecord& record, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::string stem(to_string(record.experiment));
  const auto csv = dir / (stem + ".csv");
  write_text(csv, render_csv(record));
  write_text(dir / (stem + "_meta.json"), render_meta(record));
  return csv;
}

}  // namespace ssr
