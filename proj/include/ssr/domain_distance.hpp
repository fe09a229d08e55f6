#pragma once

#include <optional>
#include <string>

#include "ssr/model.hpp"

namespace ssr {

/// Class means of the labeled domain (mu1, mu2) and of the shifted domain.
struct MeanQuadruple {
  Vector mu1;
  Vector mu2;
  Vector mu1_shift;
  Vector mu2_shift;

  void validate() const;
};

struct BoundReport {
  enum class Measure { wasserstein, maximal_info, h_divergence };

  Measure measure = Measure::wasserstein;
  double tau = 0.0;
  double bound = 0.0;
  /// Bound with the labeled-domain gap in the denominator, when its precondition holds.
  std::optional<double> refined_bound;
  /// alpha = zeta sqrt(log(4 / (1 - tau))); h-divergence only.
  std::optional<double> alpha;
};

std::string to_json(const BoundReport& report);

/// max(|mu1~ - mu1|, |mu2~ - mu2|) / |mu1~ - mu2~|.
double d_nu(const MeanQuadruple& q);

/// For equal isotropic covariances the W1 distance is the mean displacement.
double gaussian_wasserstein(const Eigen::Ref<const Vector>& mean_a, const Eigen::Ref<const Vector>& mean_b);

/// Class-conditional W1 distances at most tau imply d_nu <= tau / |mu1~ - mu2~|,
/// and tau / (|mu1 - mu2| - 2 tau) once 2 tau < |mu1 - mu2|.
BoundReport wasserstein_dnu_bound(double tau, const MeanQuadruple& q);

/// Maximal information at most tau, 1 <= tau < 1 + |mu1 - mu2| / (2|mu1| + 2|mu2|).
BoundReport maximal_info_dnu_bound(double tau, const MeanQuadruple& q);

/// H-divergence at most tau for linear-threshold classes, sub-gaussian scale zeta.
BoundReport hdiv_dnu_bound(double tau, double zeta, const MeanQuadruple& q);

}  // namespace ssr
