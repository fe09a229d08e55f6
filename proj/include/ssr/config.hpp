#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ssr/chime.hpp"

namespace ssr {

enum class ExperimentKind { enhance, sparsity, gap, irrelevant, measures };

std::string_view to_string(ExperimentKind kind);
ExperimentKind experiment_from_string(std::string_view text);

/// Resolved experiment configuration. Fields absent from the JSON take the
/// per-experiment defaults; unknown fields are rejected.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::enhance;
  std::int64_t dim = 0;
  /// Unset only for enhance, where sigma follows the ratio rule per epsilon.
  std::optional<double> sigma;
  std::vector<double> epsilon_grid;
  std::int64_t n_labeled = 0;
  std::int64_t n_unlabeled = 0;
  std::int64_t n_seeds = 0;
  std::uint64_t master_seed = 0;
  std::optional<ChimeConfig> chime;
  std::string output_dir = "out";

  // Construction knobs beyond the core fields.
  double mean_scale = 1.0;
  std::int64_t support_size = 10;
  double gap_multiplier = 4.0;
  std::int64_t shifted_sign_flips = 3;
  bool force_full_support = false;
  std::vector<std::int64_t> n_grid;
  double shift_scale = 1.2;
  std::vector<double> a_grid;
  /// Target of (1/d + 1/n_unlabeled) sigma^2 / eps^2 for the enhance default sigma.
  double sigma_ratio = 0.01;

  void validate() const;
  /// sigma used at this epsilon; enhance without explicit sigma uses the ratio rule.
  double sigma_at(double epsilon) const;
  /// Canonical JSON of the resolved config (sorted keys).
  std::string to_json() const;
  std::uint64_t digest() const;
};

ExperimentConfig default_config(ExperimentKind kind);
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::string& path);

ChimeConfig parse_chime_config(std::string_view json_text);
std::string to_json(const ChimeConfig& cfg);

}  // namespace ssr
