#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ssr/errors.hpp"
#include "ssr/model.hpp"

namespace ssr {

struct ChimeConfig {
  enum class SigmaScaling { paper_literal, variance_scaled };

  double c1 = 0.5;
  double c_lambda = 3.0;
  double kappa = 0.3;
  int t_max = 30;
  /// Top-s norm parameter; unset means max(1, ceil(d / 10)).
  std::optional<std::int64_t> s;
  SigmaScaling sigma_scaling = SigmaScaling::variance_scaled;
  /// Explicit starting means; both or neither.
  std::optional<Vector> init_mu1;
  std::optional<Vector> init_mu2;

  void validate(Eigen::Index dim) const;
  std::int64_t resolved_s(Eigen::Index dim) const;
};

struct ChimeState {
  double omega = 0.5;
  Vector mu1_hat;
  Vector mu2_hat;
  Vector beta;
  double lambda = 0.0;
  int iteration = 0;
};

struct TrajectoryPoint {
  int iteration = 0;
  double lambda = 0.0;
  std::int64_t support_size = 0;
};

struct SupportEstimate {
  std::vector<std::int64_t> support;
  std::vector<TrajectoryPoint> trajectory;
  ChimeState final_state;
};

std::string to_json(const SupportEstimate& estimate);

/// Responsibilities summed to 0 or n. Carries the iterations completed so far.
class CollapsedResponsibilities : public Error {
 public:
  CollapsedResponsibilities(const std::string& what, std::vector<TrajectoryPoint> trajectory = {})
      : Error(what), trajectory_(std::move(trajectory)) {}
  const std::vector<TrajectoryPoint>& trajectory() const { return trajectory_; }

 private:
  std::vector<TrajectoryPoint> trajectory_;
};

/// sgn(v_j) max(|v_j| - lambda, 0).
Vector soft_threshold(const Eigen::Ref<const Vector>& v, double lambda);

/// l2 norm of the s largest-magnitude entries.
double norm_2s(const Eigen::Ref<const Vector>& u, std::int64_t s);

/// gamma_i = omega / (omega + (1 - omega) exp(e_i)) with
/// e_i = (mu2 - mu1)^T (x_i - (mu1 + mu2) / 2), divided by sigma^2 when variance_scaled.
/// Outputs are kept strictly inside (0, 1).
Vector e_step(const ChimeState& state, const Dataset& data, double sigma, const ChimeConfig& cfg, int threads = 1);

struct MStepResult {
  double omega = 0.0;
  Vector mu1;
  Vector mu2;
};

/// omega' = mean(gamma); mu1' weighted by 1 - gamma, mu2' weighted by gamma.
MStepResult m_step(const Dataset& data, const Eigen::Ref<const Vector>& gamma);

/// omega = 1/2, means at sample mean -/+ v sd_v along the top principal direction
/// (sign fixed so its largest-magnitude entry is positive), beta and lambda per the
/// initial tuning rule. Deterministic in the data.
ChimeState init_chime(const Dataset& data, const ChimeConfig& cfg);

SupportEstimate run_chime(const Dataset& data, double sigma, const ChimeConfig& cfg, int threads = 1);

}  // namespace ssr
