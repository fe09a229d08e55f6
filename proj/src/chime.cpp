#include "ssr/chime.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <functional>

#include <Eigen/Eigenvalues>

#include "ssr/format.hpp"
#include "ssr/parallel.hpp"

namespace ssr {

void ChimeConfig::validate(Eigen::Index dim) const {
  if (!(c1 > 0.0) || !std::isfinite(c1)) throw PreconditionError("chime c1 must be > 0");
  if (!(c_lambda > 0.0) || !std::isfinite(c_lambda)) throw PreconditionError("chime c_lambda must be > 0");
  if (!(kappa > 0.0 && kappa < 1.0)) throw PreconditionError("chime kappa must lie in (0, 1)");
  if (t_max < 1) throw PreconditionError("chime t_max must be >= 1");
  if (s && (*s < 1 || *s > dim)) throw PreconditionError("chime s must lie in [1, dim]");
  if (init_mu1.has_value() != init_mu2.has_value()) throw PreconditionError("init means come in pairs");
  if (init_mu1 && (init_mu1->size() != dim || init_mu2->size() != dim)) {
    throw DimensionError("init means do not match data dimension");
  }
}

std::int64_t ChimeConfig::resolved_s(Eigen::Index dim) const {
  if (s) return *s;
  return std::max<std::int64_t>(1, (static_cast<std::int64_t>(dim) + 9) / 10);
}

std::string to_json(const SupportEstimate& estimate) {
  std::string out = "{\"support\":[";
  for (std::size_t k = 0; k < estimate.support.size(); ++k) {
    if (k) out += ',';
    out += std::to_string(estimate.support[k]);
  }
  out += "],\"trajectory\":[";
  for (std::size_t k = 0; k < estimate.trajectory.size(); ++k) {
    const auto& p = estimate.trajectory[k];
    if (k) out += ',';
    out += "[" + std::to_string(p.iteration) + "," + format_double(p.lambda) + "," +
           std::to_string(p.support_size) + "]";
  }
  return out + "]}";
}

Vector soft_threshold(const Eigen::Ref<const Vector>& v, double lambda) {
  if (!(lambda >= 0.0)) throw PreconditionError("soft threshold needs lambda >= 0");
  return v.unaryExpr([lambda](double x) {
    const double shrunk = std::max(std::abs(x) - lambda, 0.0);
    return x > 0.0 ? shrunk : (x < 0.0 ? -shrunk : 0.0);
  });
}

double norm_2s(const Eigen::Ref<const Vector>& u, std::int64_t s) {
  if (s < 1) throw PreconditionError("norm_2s needs s >= 1");
  std::vector<double> squares(static_cast<std::size_t>(u.size()));
  for (Eigen::Index j = 0; j < u.size(); ++j) squares[static_cast<std::size_t>(j)] = u[j] * u[j];
  const auto keep = std::min<std::size_t>(static_cast<std::size_t>(s), squares.size());
  std::partial_sort(squares.begin(), squares.begin() + static_cast<std::ptrdiff_t>(keep), squares.end(),
                    std::greater<>());
  double total = 0.0;
  for (std::size_t k = 0; k < keep; ++k) total += squares[k];
  return std::sqrt(total);
}

Vector e_step(const ChimeState& state, const Dataset& data, double sigma, const ChimeConfig& cfg, int threads) {
  if (!(state.omega > 0.0 && state.omega < 1.0)) throw PreconditionError("omega must lie in (0, 1)");
  if (state.mu1_hat.size() != data.dim() || state.mu2_hat.size() != data.dim()) {
    throw DimensionError("state means do not match data dimension");
  }
  double scale = 1.0;
  if (cfg.sigma_scaling == ChimeConfig::SigmaScaling::variance_scaled) {
    if (!(sigma > 0.0)) throw PreconditionError("variance_scaled e-step needs sigma > 0");
    scale = 1.0 / (sigma * sigma);
  }
  const Vector direction = (state.mu2_hat - state.mu1_hat) * scale;
  const double offset = direction.dot(0.5 * (state.mu1_hat + state.mu2_hat));
  const double omega = state.omega;
  const double upper = std::nextafter(1.0, 0.0);
  Vector gamma(data.rows());
  constexpr Eigen::Index kBlock = 1024;
  const auto blocks = static_cast<std::size_t>((data.rows() + kBlock - 1) / kBlock);
  parallel_for(blocks, threads, [&](std::size_t blk) {
    const Eigen::Index begin = static_cast<Eigen::Index>(blk) * kBlock;
    const Eigen::Index end = std::min(data.rows(), begin + kBlock);
    for (Eigen::Index i = begin; i < end; ++i) {
      const double exponent = std::clamp(data.features.row(i).dot(direction) - offset, -700.0, 700.0);
      const double g = omega / (omega + (1.0 - omega) * std::exp(exponent));
      gamma[i] = std::clamp(g, DBL_MIN, upper);
    }
  });
  return gamma;
}

MStepResult m_step(const Dataset& data, const Eigen::Ref<const Vector>& gamma) {
  if (gamma.size() != data.rows()) throw DimensionError("gamma length does not match rows");
  const double n = static_cast<double>(data.rows());
  const double sum_gamma = gamma.sum();
  const Vector complement = Vector::Ones(gamma.size()) - gamma;
  const double sum_complement = complement.sum();
  if (sum_gamma < 1e-12 || sum_complement < 1e-12) throw CollapsedResponsibilities("responsibilities collapsed");
  MStepResult out;
  out.omega = sum_gamma / n;
  if (!(out.omega > 0.0 && out.omega < 1.0)) throw CollapsedResponsibilities("mixing weight left (0, 1)");
  out.mu1 = data.features.transpose() * complement / sum_complement;
  out.mu2 = data.features.transpose() * gamma / sum_gamma;
  return out;
}

namespace {

double base_penalty(const ChimeConfig& cfg, const Dataset& data) {
  return cfg.c_lambda * std::sqrt(std::log(static_cast<double>(data.dim())) / static_cast<double>(data.rows()));
}

std::int64_t support_size(const Vector& beta) { return static_cast<std::int64_t>((beta.array() != 0.0).count()); }

}  // namespace

ChimeState init_chime(const Dataset& data, const ChimeConfig& cfg) {
  if (data.rows() < 2) throw PreconditionError("init_chime needs at least 2 rows");
  cfg.validate(data.dim());
  ChimeState state;
  state.omega = 0.5;
  if (cfg.init_mu1) {
    state.mu1_hat = *cfg.init_mu1;
    state.mu2_hat = *cfg.init_mu2;
  } else {
    const Vector mean = data.features.colwise().mean().transpose();
    const Eigen::MatrixXd centered = data.features.rowwise() - mean.transpose();
    const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(data.rows() - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    const Eigen::Index d = data.dim();
    Vector direction;
    double spread = 0.0;
    const auto& values = solver.eigenvalues();
    const double top = values[d - 1];
    const bool unique_top = top > 0.0 && (d == 1 || top - values[d - 2] > 1e-12 * top);
    if (solver.info() == Eigen::Success && unique_top) {
      direction = solver.eigenvectors().col(d - 1);
      spread = std::sqrt(top);
    } else {
      Eigen::Index axis = 0;
      const double var = cov.diagonal().maxCoeff(&axis);
      direction = Vector::Unit(d, axis);
      spread = std::sqrt(std::max(var, 0.0));
    }
    Eigen::Index lead = 0;
    direction.cwiseAbs().maxCoeff(&lead);
    if (direction[lead] < 0.0) direction = -direction;
    state.mu1_hat = mean - spread * direction;
    state.mu2_hat = mean + spread * direction;
  }
  const Vector diff = state.mu1_hat - state.mu2_hat;
  const auto s = cfg.resolved_s(data.dim());
  state.lambda = cfg.c1 * std::max(std::abs(state.omega), norm_2s(diff, s)) / std::sqrt(static_cast<double>(s)) +
                 base_penalty(cfg, data);
  state.beta = soft_threshold(diff, state.lambda);
  state.iteration = 0;
  return state;
}

SupportEstimate run_chime(const Dataset& data, double sigma, const ChimeConfig& cfg, int threads) {
  SupportEstimate estimate;
  ChimeState state = init_chime(data, cfg);
  estimate.trajectory.push_back({0, state.lambda, support_size(state.beta)});
  const double floor = base_penalty(cfg, data);
  for (int t = 1; t <= cfg.t_max; ++t) {
    const Vector gamma = e_step(state, data, sigma, cfg, threads);
    MStepResult step;
    try {
      step = m_step(data, gamma);
    } catch (const CollapsedResponsibilities& e) {
      throw CollapsedResponsibilities(e.what(), estimate.trajectory);
    }
    state.omega = step.omega;
    state.mu1_hat = std::move(step.mu1);
    state.mu2_hat = std::move(step.mu2);
    state.lambda = cfg.kappa * state.lambda + floor;
    state.beta = soft_threshold(state.mu1_hat - state.mu2_hat, state.lambda);
    state.iteration = t;
    estimate.trajectory.push_back({t, state.lambda, support_size(state.beta)});
  }
  for (Eigen::Index j = 0; j < state.beta.size(); ++j) {
    if (state.beta[j] != 0.0) estimate.support.push_back(j);
  }
  estimate.final_state = std::move(state);
  return estimate;
}

}  // namespace ssr
