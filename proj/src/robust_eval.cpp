#include "ssr/robust_eval.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "ssr/errors.hpp"
#include "ssr/format.hpp"
#include "ssr/parallel.hpp"
#include "ssr/rng.hpp"

namespace ssr {

AttackBudget::AttackBudget(double epsilon) : epsilon_(epsilon) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw PreconditionError("attack radius must be finite and >= 0");
}

std::string to_json(const ErrorReport& report) {
  return "{\"value\":" + format_double(report.value) + ",\"std_err\":" + format_double(report.std_err) +
         ",\"kind\":\"" + (report.kind == ErrorReport::Kind::robust ? "robust" : "standard") +
         "\",\"method\":\"" + (report.method == ErrorReport::Method::closed_form ? "closed_form" : "monte_carlo") +
         "\"}";
}

double q_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

ErrorReport closed_form_robust_error(const LinearClassifier& clf, const DomainSpec& spec,
                                     const AttackBudget& budget) {
  spec.validate();
  if (!spec.noise.is_gaussian() || !spec.feature_map.is_identity()) {
    throw ClosedFormUnavailable("closed form needs gaussian noise and the identity map");
  }
  if (!(spec.sigma > 0.0)) throw PreconditionError("closed form needs sigma > 0");
  if (clf.dim() != spec.dim()) throw DimensionError("classifier and domain dimensions differ");
  const Vector& w = clf.w();
  const double norm2 = w.norm();
  if (norm2 == 0.0) throw DegenerateClassifier("w is the zero vector");
  const double norm1 = w.lpNorm<1>();
  const double eps = budget.epsilon();
  const double scale = spec.sigma * norm2;
  const double margin_pos = w.dot(spec.mean_pos - clf.b()) - eps * norm1;
  const double margin_neg = w.dot(clf.b() - spec.mean_neg) - eps * norm1;
  ErrorReport report;
  report.value = spec.mixing_pos * q_tail(margin_pos / scale) + (1.0 - spec.mixing_pos) * q_tail(margin_neg / scale);
  report.kind = eps > 0.0 ? ErrorReport::Kind::robust : ErrorReport::Kind::standard;
  report.method = ErrorReport::Method::closed_form;
  return report;
}

Vector worst_case_perturbation(const LinearClassifier& clf, const Eigen::Ref<const Vector>& x, int y,
                               const AttackBudget& budget) {
  if (y != 1 && y != -1) throw PreconditionError("label must be +1 or -1");
  if (x.size() != clf.dim()) throw DimensionError("input dimension does not match classifier");
  const double step = -static_cast<double>(y) * budget.epsilon();
  return clf.w().unaryExpr([step](double wj) { return wj > 0.0 ? step : (wj < 0.0 ? -step : 0.0); });
}

ErrorReport monte_carlo_error(const LinearClassifier& clf, const DomainSpec& spec, const AttackBudget& budget,
                              std::int64_t n_samples, std::uint64_t seed, int threads) {
  spec.validate();
  if (n_samples < 100) throw PreconditionError("monte_carlo_error needs at least 100 samples");
  if (clf.dim() != spec.dim()) throw DimensionError("classifier and domain dimensions differ");
  const bool attacked = budget.epsilon() > 0.0;
  if (attacked && !spec.feature_map.is_identity()) {
    throw AttackUnavailable("exact attack needs the identity feature map");
  }
  constexpr std::int64_t kBlock = 4096;
  const auto blocks = static_cast<std::size_t>((n_samples + kBlock - 1) / kBlock);
  std::vector<std::int64_t> mistakes(blocks, 0);
  parallel_for(blocks, threads, [&](std::size_t blk) {
    Vector x(spec.dim());
    const std::int64_t begin = static_cast<std::int64_t>(blk) * kBlock;
    const std::int64_t end = std::min(n_samples, begin + kBlock);
    std::int64_t count = 0;
    for (std::int64_t i = begin; i < end; ++i) {
      const int y = draw_row(spec, seed, static_cast<std::uint64_t>(i), x);
      if (attacked) x += worst_case_perturbation(clf, x, y, budget);
      if (predict(clf, x) != y) ++count;
    }
    mistakes[blk] = count;
  });
  std::int64_t total = 0;
  for (auto m : mistakes) total += m;
  ErrorReport report;
  const double n = static_cast<double>(n_samples);
  report.value = static_cast<double>(total) / n;
  report.std_err = std::sqrt(report.value * (1.0 - report.value) / n);
  report.kind = attacked ? ErrorReport::Kind::robust : ErrorReport::Kind::standard;
  report.method = ErrorReport::Method::monte_carlo;
  return report;
}

Vector hard_threshold(const Eigen::Ref<const Vector>& mu, double epsilon) {
  if (!(epsilon >= 0.0)) throw PreconditionError("threshold must be >= 0");
  return mu.unaryExpr([epsilon](double m) {
    const double shrunk = std::max(std::abs(m) - epsilon, 0.0);
    return m > 0.0 ? shrunk : (m < 0.0 ? -shrunk : 0.0);
  });
}

LinearClassifier optimal_robust_direction(const Eigen::Ref<const Vector>& mu, double epsilon) {
  if (mu.size() == 0) throw DimensionError("empty mean vector");
  if (epsilon >= mu.lpNorm<Eigen::Infinity>()) throw NoRobustDirection("epsilon >= |mu|_inf leaves no direction");
  Vector w = hard_threshold(mu, epsilon);
  w /= w.norm();
  return LinearClassifier(std::move(w), Vector::Zero(mu.size()), Provenance::explicit_);
}

}  // namespace ssr
