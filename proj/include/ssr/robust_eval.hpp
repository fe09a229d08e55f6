#pragma once

#include <cstdint>
#include <string>

#include "ssr/estimators.hpp"
#include "ssr/model.hpp"

namespace ssr {

/// l-infinity perturbation radius.
class AttackBudget {
 public:
  explicit AttackBudget(double epsilon);
  double epsilon() const { return epsilon_; }

 private:
  double epsilon_;
};

struct ErrorReport {
  enum class Kind { standard, robust };
  enum class Method { closed_form, monte_carlo };

  double value = 0.0;
  double std_err = 0.0;
  Kind kind = Kind::standard;
  Method method = Method::closed_form;
};

std::string to_json(const ErrorReport& report);

/// Standard normal upper tail Q(x) = P(Z > x).
double q_tail(double x);

/// Exact error of sgn(w^T (x - b)) under the worst l-infinity attack of radius
/// epsilon, for a gaussian mixture seen through the identity map:
///
///   q Q((w^T(mu_pos - b) - eps |w|_1) / (sigma |w|_2))
///     + (1 - q) Q((w^T(b - mu_neg) - eps |w|_1) / (sigma |w|_2)).
ErrorReport closed_form_robust_error(const LinearClassifier& clf, const DomainSpec& spec,
                                     const AttackBudget& budget);

/// Minimizer of y w^T (x + delta - b) over the ball: delta = -y eps sgn(w),
/// with sgn(0) = 0 so zero-weight coordinates stay put.
Vector worst_case_perturbation(const LinearClassifier& clf, const Eigen::Ref<const Vector>& x, int y,
                               const AttackBudget& budget);

/// Misclassification rate of attacked samples with binomial standard error.
/// Rows are drawn with the sampler's per-row streams, so `threads` only
/// affects speed.
ErrorReport monte_carlo_error(const LinearClassifier& clf, const DomainSpec& spec, const AttackBudget& budget,
                              std::int64_t n_samples, std::uint64_t seed, int threads = 1);

/// (T_eps(mu))_j = sgn(mu_j) max(|mu_j| - eps, 0).
Vector hard_threshold(const Eigen::Ref<const Vector>& mu, double epsilon);

/// Unit direction T_eps(mu) / |T_eps(mu)| with b = 0; requires eps < |mu|_inf.
LinearClassifier optimal_robust_direction(const Eigen::Ref<const Vector>& mu, double epsilon);

}  // namespace ssr
