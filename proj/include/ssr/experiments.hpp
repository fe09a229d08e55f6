#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ssr/config.hpp"
#include "ssr/domain_distance.hpp"

namespace ssr {

/// Experiment output. Cells are preformatted; an empty cell marks a missing value.
struct RunRecord {
  ExperimentKind experiment = ExperimentKind::enhance;
  std::uint64_t config_digest = 0;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  /// (row index, reason) for rows whose estimator degenerated.
  std::vector<std::pair<std::size_t, std::string>> skipped;
  double wall_time = 0.0;

  std::size_t column(const std::string& name) const;
};

/// Seed of trial i: hash of (master seed, experiment tag, i).
std::uint64_t trial_seed(const ExperimentConfig& cfg, std::uint64_t trial);

RunRecord run_enhance_experiment(const ExperimentConfig& cfg, int threads);
RunRecord run_sparsity_experiment(const ExperimentConfig& cfg, int threads);
RunRecord run_gap_experiment(const ExperimentConfig& cfg, int threads);
RunRecord run_irrelevant_experiment(const ExperimentConfig& cfg, int threads);
RunRecord run_measures_report(const ExperimentConfig& cfg, int threads);

/// Dispatches on cfg.experiment.
RunRecord run_experiment(const ExperimentConfig& cfg, int threads);

/// Sparse labeled mean (mean_scale on the first m coordinates) and the shifted
/// mean sharing its support, with per-coordinate half-gaps growing linearly from
/// gap/2 to 3 gap/2 and the first shifted_sign_flips coordinates negated.
struct SparsityConstruction {
  Vector mu;
  Vector mu_shift;
  double gap = 0.0;
};
SparsityConstruction sparsity_construction(const ExperimentConfig& cfg);

/// Random mean quadruple for the measures report; instance 0 has no shift.
MeanQuadruple measures_instance(const ExperimentConfig& cfg, std::uint64_t instance);

/// CSV with a leading "# config_digest: 0x..." line, then header and rows.
std::string render_csv(const RunRecord& record);
/// Sidecar with digest, wall time, row count and skipped-row reasons.
std::string render_meta(const RunRecord& record);
/// Writes <dir>/<experiment>.csv and <dir>/<experiment>_meta.json; returns the CSV path.
std::filesystem::path write_record(const RunRecord& record, const std::filesystem::path& dir);

}  // namespace ssr
