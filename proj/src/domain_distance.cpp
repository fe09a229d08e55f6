#include "ssr/domain_distance.hpp"

#include <algorithm>
#include <cmath>

#include "ssr/errors.hpp"
#include "ssr/format.hpp"

namespace ssr {

void MeanQuadruple::validate() const {
  const auto d = mu1.size();
  if (d == 0 || mu2.size() != d || mu1_shift.size() != d || mu2_shift.size() != d) {
    throw DimensionError("mean quadruple needs four vectors of equal positive dimension");
  }
}

std::string to_json(const BoundReport& report) {
  const char* measure = report.measure == BoundReport::Measure::wasserstein    ? "wasserstein"
                        : report.measure == BoundReport::Measure::maximal_info ? "maximal_info"
                                                                               : "h_divergence";
  std::string out = std::string("{\"measure\":\"") + measure + "\",\"tau\":" + format_double(report.tau) +
                    ",\"bound\":" + format_double(report.bound);
  if (report.refined_bound) out += ",\"refined_bound\":" + format_double(*report.refined_bound);
  if (report.alpha) out += ",\"alpha\":" + format_double(*report.alpha);
  return out + "}";
}

namespace {

double shifted_gap(const MeanQuadruple& q) {
  q.validate();
  const double gap = (q.mu1_shift - q.mu2_shift).norm();
  if (!(gap > 0.0)) throw DegenerateGap("shifted class means coincide");
  return gap;
}

}  // namespace

double d_nu(const MeanQuadruple& q) {
  const double gap = shifted_gap(q);
  return std::max((q.mu1_shift - q.mu1).norm(), (q.mu2_shift - q.mu2).norm()) / gap;
}

double gaussian_wasserstein(const Eigen::Ref<const Vector>& mean_a, const Eigen::Ref<const Vector>& mean_b) {
  if (mean_a.size() != mean_b.size()) throw DimensionError("means differ in dimension");
  return (mean_a - mean_b).norm();
}

BoundReport wasserstein_dnu_bound(double tau, const MeanQuadruple& q) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw PreconditionError("tau must be finite and >= 0");
  BoundReport report;
  report.measure = BoundReport::Measure::wasserstein;
  report.tau = tau;
  report.bound = tau / shifted_gap(q);
  const double labeled_gap = (q.mu1 - q.mu2).norm();
  if (labeled_gap - 2.0 * tau > 0.0) report.refined_bound = tau / (labeled_gap - 2.0 * tau);
  return report;
}

BoundReport maximal_info_dnu_bound(double tau, const MeanQuadruple& q) {
  q.validate();
  const double norm1 = q.mu1.norm();
  const double norm2 = q.mu2.norm();
  const double labeled_gap = (q.mu1 - q.mu2).norm();
  if (!(tau >= 1.0) || !std::isfinite(tau)) throw PreconditionError("maximal information bound needs tau >= 1");
  const double denom = labeled_gap - 2.0 * (tau - 1.0) * (norm1 + norm2);
  if (!(denom > 0.0)) throw PreconditionError("tau exceeds 1 + |mu1 - mu2| / (2|mu1| + 2|mu2|)");
  BoundReport report;
  report.measure = BoundReport::Measure::maximal_info;
  report.tau = tau;
  report.bound = (tau - 1.0) * std::max(norm1, norm2) / denom;
  return report;
}

BoundReport hdiv_dnu_bound(double tau, double zeta, const MeanQuadruple& q) {
  if (!(tau >= 0.0 && tau < 1.0)) throw PreconditionError("h-divergence bound needs 0 <= tau < 1");
  if (!(zeta > 0.0) || !std::isfinite(zeta)) throw PreconditionError("zeta must be > 0");
  const double alpha = zeta * std::sqrt(std::log(4.0 / (1.0 - tau)));
  BoundReport report;
  report.measure = BoundReport::Measure::h_divergence;
  report.tau = tau;
  report.alpha = alpha;
  report.bound = alpha / shifted_gap(q);
  const double labeled_gap = (q.mu1 - q.mu2).norm();
  const double threshold = 1.0 - 4.0 * std::exp(-labeled_gap * labeled_gap / (4.0 * zeta * zeta));
  if (tau <= threshold && labeled_gap - 2.0 * alpha > 0.0) {
    report.refined_bound = alpha / (labeled_gap - 2.0 * alpha);
  }
  return report;
}

}  // namespace ssr
