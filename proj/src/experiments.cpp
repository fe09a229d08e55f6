#include "ssr/experiments.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <random>

#include "ssr/chime.hpp"
#include "ssr/errors.hpp"
#include "ssr/estimators.hpp"
#include "ssr/format.hpp"
#include "ssr/parallel.hpp"
#include "ssr/rng.hpp"
#include "ssr/robust_eval.hpp"

namespace ssr {

std::size_t RunRecord::column(const std::string& name) const {
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (columns[k] == name) return k;
  }
  throw PreconditionError("no column '" + name + "'");
}

std::uint64_t trial_seed(const ExperimentConfig& cfg, std::uint64_t trial) {
  return derive_seed(cfg.master_seed, {fnv1a(to_string(cfg.experiment)), trial});
}

namespace {

enum Role : std::uint64_t { kLabeled = 0, kSame = 1, kShifted = 2 };

struct TrialRows {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::pair<std::size_t, std::string>> skipped;
};

using TrialBody = std::function<TrialRows(std::uint64_t trial, std::uint64_t seed)>;

RunRecord collect(const ExperimentConfig& cfg, std::vector<std::string> columns, int threads, const TrialBody& body) {
  const auto start = std::chrono::steady_clock::now();
  RunRecord record;
  record.experiment = cfg.experiment;
  record.config_digest = cfg.digest();
  record.columns = std::move(columns);
  const auto trials = static_cast<std::size_t>(cfg.n_seeds);
  std::vector<TrialRows> results(trials);
  parallel_for(trials, threads, [&](std::size_t i) { results[i] = body(i, trial_seed(cfg, i)); });
  for (auto& trial : results) {
    const std::size_t base = record.rows.size();
    for (auto& [local, reason] : trial.skipped) record.skipped.emplace_back(base + local, std::move(reason));
    for (auto& row : trial.rows) record.rows.push_back(std::move(row));
  }
  record.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!record.rows.empty() && record.skipped.size() == record.rows.size()) {
    throw DegenerateRun("every row of the run was skipped");
  }
  return record;
}

std::string cell(double value) { return format_double(value); }

/// Row with the leading key cells filled and the rest left empty.
std::vector<std::string> skipped_row(std::vector<std::string> keys, std::size_t width) {
  keys.resize(width);
  return keys;
}

/// Supervised teacher, pseudo-labels on `unlabeled`, then the semi-supervised student.
LinearClassifier self_train(const LinearClassifier& teacher, const Dataset& unlabeled) {
  return fit_semi_supervised(pseudo_label(teacher, unlabeled), unlabeled);
}

double robust_error(const LinearClassifier& clf, const DomainSpec& spec, double epsilon) {
  return closed_form_robust_error(clf, spec, AttackBudget(epsilon)).value;
}

bool is_degenerate(const Error& e) {
  return dynamic_cast<const DegenerateEstimator*>(&e) || dynamic_cast<const DegeneratePseudoSplit*>(&e) ||
         dynamic_cast<const DegenerateClassifier*>(&e) || dynamic_cast<const EmptySupport*>(&e) ||
         dynamic_cast<const CollapsedResponsibilities*>(&e);
}

}  // namespace

RunRecord run_enhance_experiment(const ExperimentConfig& cfg, int threads) {
  if (cfg.experiment != ExperimentKind::enhance) throw PreconditionError("config is not an enhance experiment");
  cfg.validate();
  const std::vector<std::string> columns{"seed", "epsilon", "err_same", "err_shifted", "diff"};
  const auto d = static_cast<Eigen::Index>(cfg.dim);
  return collect(cfg, columns, threads, [&](std::uint64_t trial, std::uint64_t seed) {
    TrialRows out;
    for (std::size_t k = 0; k < cfg.epsilon_grid.size(); ++k) {
      const double eps = cfg.epsilon_grid[k];
      const double sigma = cfg.sigma_at(eps);
      const DomainSpec labeled = DomainSpec::symmetric(Vector::Constant(d, 2.0 * eps), sigma);
      const DomainSpec shifted = DomainSpec::symmetric(Vector::Constant(d, eps), sigma);
      std::vector<std::string> keys{std::to_string(trial), cell(eps)};
      try {
        const auto teacher = fit_supervised(sample_labeled(labeled, cfg.n_labeled, derive_seed(seed, {k, kLabeled})));
        const auto same = self_train(teacher, sample_unlabeled(labeled, cfg.n_unlabeled, derive_seed(seed, {k, kSame})));
        const auto moved =
            self_train(teacher, sample_unlabeled(shifted, cfg.n_unlabeled, derive_seed(seed, {k, kShifted})));
        const double err_same = robust_error(same, labeled, eps);
        const double err_shifted = robust_error(moved, labeled, eps);
        keys.insert(keys.end(), {cell(err_same), cell(err_shifted), cell(err_same - err_shifted)});
        out.rows.push_back(std::move(keys));
      } catch (const Error& e) {
        if (!is_degenerate(e)) throw;
        out.skipped.emplace_back(out.rows.size(), e.what());
        out.rows.push_back(skipped_row(std::move(keys), columns.size()));
      }
    }
    return out;
  });
}

SparsityConstruction sparsity_construction(const ExperimentConfig& cfg) {
  const auto d = static_cast<Eigen::Index>(cfg.dim);
  const auto m = static_cast<Eigen::Index>(cfg.support_size);
  const double sigma = cfg.sigma_at(0.0);
  SparsityConstruction out;
  out.gap = cfg.gap_multiplier * sigma *
            std::sqrt(2.0 * static_cast<double>(m) * std::log(static_cast<double>(d)) /
                      static_cast<double>(cfg.n_unlabeled));
  out.mu = Vector::Zero(d);
  out.mu_shift = Vector::Zero(d);
  for (Eigen::Index j = 0; j < m; ++j) {
    out.mu[j] = cfg.mean_scale;
    const double growth = m > 1 ? 1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(m - 1) : 1.0;
    out.mu_shift[j] = 0.5 * out.gap * growth * (j < cfg.shifted_sign_flips ? -1.0 : 1.0);
  }
  return out;
}

RunRecord run_sparsity_experiment(const ExperimentConfig& cfg, int threads) {
  if (cfg.experiment != ExperimentKind::sparsity) throw PreconditionError("config is not a sparsity experiment");
  cfg.validate();
  const std::vector<std::string> columns{"seed", "epsilon", "err_semi", "err_sparse", "diff", "support_recovered"};
  const auto construction = sparsity_construction(cfg);
  const double sigma = cfg.sigma_at(0.0);
  const DomainSpec labeled = DomainSpec::symmetric(construction.mu, sigma);
  const DomainSpec shifted = DomainSpec::symmetric(construction.mu_shift, sigma);
  const ChimeConfig chime_cfg = cfg.chime.value_or(ChimeConfig{});
  std::vector<std::int64_t> truth(static_cast<std::size_t>(cfg.support_size));
  for (std::size_t j = 0; j < truth.size(); ++j) truth[j] = static_cast<std::int64_t>(j);
  return collect(cfg, columns, threads, [&](std::uint64_t trial, std::uint64_t seed) {
    TrialRows out;
    const auto keys = [&](std::size_t k) { return std::vector<std::string>{std::to_string(trial), cell(cfg.epsilon_grid[k])}; };
    const auto skip_all = [&](const std::string& reason) {
      for (std::size_t k = 0; k < cfg.epsilon_grid.size(); ++k) {
        out.skipped.emplace_back(out.rows.size(), reason);
        out.rows.push_back(skipped_row(keys(k), columns.size()));
      }
    };
    try {
      const Dataset labeled_data = sample_labeled(labeled, cfg.n_labeled, derive_seed(seed, {0, kLabeled}));
      const Dataset unlabeled = sample_unlabeled(shifted, cfg.n_unlabeled, derive_seed(seed, {0, kShifted}));
      const auto teacher = fit_supervised(labeled_data);
      const auto semi = self_train(teacher, unlabeled);
      std::vector<std::int64_t> support;
      if (cfg.force_full_support) {
        for (std::int64_t j = 0; j < cfg.dim; ++j) support.push_back(j);
      } else {
        support = run_chime(unlabeled, sigma, chime_cfg).support;
      }
      const bool recovered = support == truth;
      const auto sparse = fit_sparse(labeled_data, support);
      for (std::size_t k = 0; k < cfg.epsilon_grid.size(); ++k) {
        const double eps = cfg.epsilon_grid[k];
        const double err_semi = robust_error(semi, labeled, eps);
        const double err_sparse = robust_error(sparse, labeled, eps);
        auto row = keys(k);
        row.insert(row.end(), {cell(err_semi), cell(err_sparse), cell(err_semi - err_sparse),
                               recovered ? "true" : "false"});
        out.rows.push_back(std::move(row));
      }
    } catch (const Error& e) {
      if (!is_degenerate(e)) throw;
      skip_all(e.what());
    }
    return out;
  });
}

RunRecord run_gap_experiment(const ExperimentConfig& cfg, int threads) {
  if (cfg.experiment != ExperimentKind::gap) throw PreconditionError("config is not a gap experiment");
  cfg.validate();
  const std::vector<std::string> columns{"seed", "n", "err_std_sup", "err_rob_sup", "err_rob_semi", "d_nu"};
  const auto d = static_cast<Eigen::Index>(cfg.dim);
  const double eps = cfg.epsilon_grid.front();
  const double sigma = cfg.sigma_at(eps);
  const Vector mu = Vector::Constant(d, cfg.mean_scale);
  const DomainSpec labeled = DomainSpec::symmetric(mu, sigma);
  const DomainSpec shifted = DomainSpec::symmetric(cfg.shift_scale * mu, sigma);
  const double shift = d_nu({mu, -mu, shifted.mean_pos, shifted.mean_neg});
  return collect(cfg, columns, threads, [&](std::uint64_t trial, std::uint64_t seed) {
    TrialRows out;
    for (std::size_t k = 0; k < cfg.n_grid.size(); ++k) {
      const std::int64_t n = cfg.n_grid[k];
      std::vector<std::string> keys{std::to_string(trial), std::to_string(n)};
      try {
        const auto sup = fit_supervised(sample_labeled(labeled, 2 * n, derive_seed(seed, {k, kLabeled})));
        const auto semi =
            self_train(sup, sample_unlabeled(shifted, cfg.n_unlabeled, derive_seed(seed, {k, kShifted})));
        keys.insert(keys.end(), {cell(robust_error(sup, labeled, 0.0)), cell(robust_error(sup, labeled, eps)),
                                 cell(robust_error(semi, labeled, eps)), cell(shift)});
        out.rows.push_back(std::move(keys));
      } catch (const Error& e) {
        if (!is_degenerate(e)) throw;
        out.skipped.emplace_back(out.rows.size(), e.what());
        out.rows.push_back(skipped_row(std::move(keys), columns.size()));
      }
    }
    return out;
  });
}

RunRecord run_irrelevant_experiment(const ExperimentConfig& cfg, int threads) {
  if (cfg.experiment != ExperimentKind::irrelevant) throw PreconditionError("config is not an irrelevant experiment");
  cfg.validate();
  const std::vector<std::string> columns{"seed", "a", "err_std", "err_rob"};
  const auto d = static_cast<Eigen::Index>(cfg.dim);
  const double eps = cfg.epsilon_grid.front();
  const double sigma = cfg.sigma_at(eps);
  const DomainSpec labeled = DomainSpec::symmetric(cfg.mean_scale * Vector::Unit(d, 0), sigma);
  return collect(cfg, columns, threads, [&](std::uint64_t trial, std::uint64_t seed) {
    TrialRows out;
    for (std::size_t k = 0; k < cfg.a_grid.size(); ++k) {
      const double a = cfg.a_grid[k];
      const DomainSpec irrelevant = DomainSpec::symmetric(Vector::Unit(d, 1) / a, sigma);
      std::vector<std::string> keys{std::to_string(trial), cell(a)};
      try {
        const auto teacher = fit_supervised(sample_labeled(labeled, cfg.n_labeled, derive_seed(seed, {k, kLabeled})));
        const auto semi =
            self_train(teacher, sample_unlabeled(irrelevant, cfg.n_unlabeled, derive_seed(seed, {k, kShifted})));
        keys.insert(keys.end(), {cell(robust_error(semi, labeled, 0.0)), cell(robust_error(semi, labeled, eps))});
        out.rows.push_back(std::move(keys));
      } catch (const Error& e) {
        if (!is_degenerate(e)) throw;
        out.skipped.emplace_back(out.rows.size(), e.what());
        out.rows.push_back(skipped_row(std::move(keys), columns.size()));
      }
    }
    return out;
  });
}

MeanQuadruple measures_instance(const ExperimentConfig& cfg, std::uint64_t instance) {
  const auto d = static_cast<Eigen::Index>(cfg.dim);
  StreamEngine engine(trial_seed(cfg, instance));
  std::normal_distribution<double> normal;
  const auto gaussian = [&] {
    Vector v(d);
    for (Eigen::Index j = 0; j < d; ++j) v[j] = normal(engine);
    return v;
  };
  MeanQuadruple q;
  q.mu1 = gaussian();
  q.mu2 = gaussian();
  if (instance == 0) {
    q.mu1_shift = q.mu1;
    q.mu2_shift = q.mu2;
    return q;
  }
  // Displacements up to half the labeled gap, so some instances admit every refined bound.
  const double reach = 0.5 * (q.mu1 - q.mu2).norm();
  const auto displace = [&](const Vector& mean) {
    Vector dir = gaussian();
    dir /= dir.norm();
    const double u = engine.uniform01();
    return Vector(mean + reach * u * u * dir);
  };
  q.mu1_shift = displace(q.mu1);
  q.mu2_shift = displace(q.mu2);
  return q;
}

RunRecord run_measures_report(const ExperimentConfig& cfg, int threads) {
  if (cfg.experiment != ExperimentKind::measures) throw PreconditionError("config is not a measures report");
  cfg.validate();
  const std::vector<std::string> columns{"instance_id", "d_nu", "w_bound", "w_refined", "mi_bound", "hdiv_bound"};
  const double zeta = cfg.sigma_at(0.0);
  return collect(cfg, columns, threads, [&](std::uint64_t instance, std::uint64_t) {
    const MeanQuadruple q = measures_instance(cfg, instance);
    const double exact = d_nu(q);
    const double shift1 = gaussian_wasserstein(q.mu1, q.mu1_shift);
    const double shift2 = gaussian_wasserstein(q.mu2, q.mu2_shift);
    const double tau_w = std::max(shift1, shift2);
    std::vector<std::string> row{std::to_string(instance), cell(exact)};
    const auto check = [&](double bound, const char* what) {
      if (bound < exact) throw InvariantViolation(std::string(what) + " bound below d_nu");
      return cell(bound);
    };
    const BoundReport w = wasserstein_dnu_bound(tau_w, q);
    row.push_back(check(w.bound, "wasserstein"));
    row.push_back(w.refined_bound ? check(*w.refined_bound, "refined wasserstein") : "");
    // Smallest tau consistent with the displacements under each measure, padded against rounding.
    constexpr double kPad = 1.0 + 1e-12;
    const double tau_mi = 1.0 + kPad * std::max(shift1 / q.mu1.norm(), shift2 / q.mu2.norm());
    try {
      row.push_back(check(maximal_info_dnu_bound(tau_mi, q).bound, "maximal information"));
    } catch (const PreconditionError&) {
      row.emplace_back();
    }
    const double tau_h = std::max(0.0, 1.0 - 4.0 * std::exp(-kPad * tau_w * tau_w / (zeta * zeta)));
    try {
      row.push_back(check(hdiv_dnu_bound(tau_h, zeta, q).bound, "h-divergence"));
    } catch (const PreconditionError&) {
      row.emplace_back();
    }
    TrialRows out;
    out.rows.push_back(std::move(row));
    return out;
  });
}

RunRecord run_experiment(const ExperimentConfig& cfg, int threads) {
  switch (cfg.experiment) {
    case ExperimentKind::enhance: return run_enhance_experiment(cfg, threads);
    case ExperimentKind::sparsity: return run_sparsity_experiment(cfg, threads);
    case ExperimentKind::gap: return run_gap_experiment(cfg, threads);
    case ExperimentKind::irrelevant: return run_irrelevant_experiment(cfg, threads);
    case ExperimentKind::measures: return run_measures_report(cfg, threads);
  }
  throw PreconditionError("unknown experiment");
}

}  // namespace ssr
