#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ssr/chime.hpp"
#include "ssr/config.hpp"
#include "ssr/experiments.hpp"
#include "ssr/rng.hpp"

using namespace ssr;

namespace {

Dataset rows(std::initializer_list<std::vector<double>> list) {
  Dataset data;
  const auto d = static_cast<Eigen::Index>(list.begin()->size());
  data.features.resize(static_cast<Eigen::Index>(list.size()), d);
  Eigen::Index i = 0;
  for (const auto& x : list) {
    for (Eigen::Index j = 0; j < d; ++j) data.features(i, j) = x[static_cast<std::size_t>(j)];
    ++i;
  }
  return data;
}

double lasso_objective(const Vector& beta, const Vector& v, double lambda) {
  return 0.5 * beta.squaredNorm() - beta.dot(v) + lambda * beta.lpNorm<1>();
}

/// Shared-support shifted domain from the default sparsity experiment.
struct SparseSetup {
  ExperimentConfig cfg = default_config(ExperimentKind::sparsity);
  SparsityConstruction construction = sparsity_construction(cfg);
  DomainSpec shifted = DomainSpec::symmetric(construction.mu_shift, 1.0);
};

}  // namespace

TEST(SoftThreshold, Examples) {
  EXPECT_EQ(soft_threshold(Vector{{2.0, -0.5}}, 1.0), (Vector{{1.0, 0.0}}));
  const Vector v{{0.3, -7.0, 0.0}};
  EXPECT_EQ(soft_threshold(v, 0.0), v);
  EXPECT_THROW(soft_threshold(v, -1.0), PreconditionError);
}

TEST(SoftThreshold, AttainsTheLassoMinimum) {
  StreamEngine engine(1);
  const Vector v{{1.3, -0.4, 2.2}};
  const double lambda = 0.7;
  const Vector prox = soft_threshold(v, lambda);
  const double best = lasso_objective(prox, v, lambda);
  double search = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 1000000; ++k) {
    const Vector probe{{6.0 * engine.uniform01() - 3.0, 6.0 * engine.uniform01() - 3.0, 6.0 * engine.uniform01() - 3.0}};
    search = std::min(search, lasso_objective(probe, v, lambda));
  }
  EXPECT_LE(best, search);
  EXPECT_LE(search - best, 1e-2);
}

TEST(SoftThreshold, Nonexpansive) {
  StreamEngine engine(2);
  std::normal_distribution<double> normal;
  for (int t = 0; t < 1000; ++t) {
    Vector a(5), b(5);
    for (int j = 0; j < 5; ++j) {
      a[j] = normal(engine);
      b[j] = normal(engine);
    }
    const double lambda = engine.uniform01();
    EXPECT_LE((soft_threshold(a, lambda) - soft_threshold(b, lambda)).norm(), (a - b).norm() + 1e-15);
  }
}

TEST(Norm2s, TopEntries) {
  const Vector u{{3.0, -4.0, 1.0, 0.5}};
  EXPECT_DOUBLE_EQ(norm_2s(u, 4), u.norm());
  EXPECT_DOUBLE_EQ(norm_2s(u, 2), 5.0);
  EXPECT_DOUBLE_EQ(norm_2s(u, 1), 4.0);
  EXPECT_DOUBLE_EQ(norm_2s(u, 10), u.norm());
}

TEST(EStep, SymmetryAndLimits) {
  ChimeState state;
  state.omega = 0.5;
  state.mu1_hat = Vector{{1.0, 2.0}};
  state.mu2_hat = -state.mu1_hat;
  const ChimeConfig cfg;
  const Vector at_origin = e_step(state, rows({{0.0, 0.0}}), 1.0, cfg);
  EXPECT_DOUBLE_EQ(at_origin[0], 0.5);
  // Far past mu2 the exponent runs to +inf; far past mu1 it runs to -inf.
  const Vector far = e_step(state, rows({{-1e6, -2e6}, {1e6, 2e6}}), 1.0, cfg);
  EXPECT_GT(far[0], 0.0);
  EXPECT_LT(far[0], 1e-300);
  EXPECT_LT(far[1], 1.0);
  EXPECT_GT(far[1], 1.0 - 1e-15);
  state.omega = 1.0;
  EXPECT_THROW(e_step(state, rows({{0.0, 0.0}}), 1.0, cfg), PreconditionError);
}

TEST(EStep, ScalingModesAgreeAtUnitSigma) {
  StreamEngine engine(3);
  std::normal_distribution<double> normal;
  ChimeState state;
  state.omega = 0.3;
  state.mu1_hat = Vector{{normal(engine), normal(engine), normal(engine)}};
  state.mu2_hat = Vector{{normal(engine), normal(engine), normal(engine)}};
  const Dataset data = sample_unlabeled(DomainSpec::symmetric(Vector::Ones(3), 1.0), 500, 4);
  ChimeConfig literal, scaled;
  literal.sigma_scaling = ChimeConfig::SigmaScaling::paper_literal;
  scaled.sigma_scaling = ChimeConfig::SigmaScaling::variance_scaled;
  EXPECT_EQ(e_step(state, data, 1.0, literal), e_step(state, data, 1.0, scaled));
  const Vector g = e_step(state, data, 2.0, scaled);
  EXPECT_GT(g.minCoeff(), 0.0);
  EXPECT_LT(g.maxCoeff(), 1.0);
  EXPECT_EQ(g, e_step(state, data, 2.0, scaled, 4));
}

TEST(MStep, Examples) {
  const Dataset data = rows({{1.0, 2.0}, {3.0, -2.0}, {5.0, 0.0}});
  const auto uniform = m_step(data, Vector::Constant(3, 0.5));
  EXPECT_DOUBLE_EQ(uniform.omega, 0.5);
  EXPECT_TRUE(uniform.mu1.isApprox(Vector{{3.0, 0.0}}));
  EXPECT_TRUE(uniform.mu2.isApprox(Vector{{3.0, 0.0}}));
  const Dataset pair = rows({{1.0, 1.0}, {-2.0, 5.0}});
  const auto hard = m_step(pair, Vector{{1.0, 0.0}});
  EXPECT_EQ(hard.omega, 0.5);
  EXPECT_EQ(hard.mu1, (Vector{{-2.0, 5.0}}));
  EXPECT_EQ(hard.mu2, (Vector{{1.0, 1.0}}));
  EXPECT_THROW(m_step(pair, Vector::Zero(2)), CollapsedResponsibilities);
  EXPECT_THROW(m_step(pair, Vector::Ones(2)), CollapsedResponsibilities);
}

TEST(MStep, MixtureOfMeansIsSampleMean) {
  StreamEngine engine(6);
  const Dataset data = sample_unlabeled(DomainSpec::symmetric(Vector::Constant(4, 2.0), 1.0), 200, 7);
  const Vector mean = data.features.colwise().mean().transpose();
  for (int t = 0; t < 50; ++t) {
    Vector gamma(200);
    for (int i = 0; i < 200; ++i) gamma[i] = engine.uniform01();
    const auto step = m_step(data, gamma);
    const Vector mixed = (1.0 - step.omega) * step.mu1 + step.omega * step.mu2;
    EXPECT_LE((mixed - mean).norm(), 1e-10 * mean.norm());
  }
}

TEST(InitChime, TwoPointsSplitAlongTheirDifference) {
  const Vector a{{1.0, 2.0, 0.0}}, b{{3.0, -2.0, 1.0}};
  Dataset data = rows({{1.0, 2.0, 0.0}, {3.0, -2.0, 1.0}});
  ChimeConfig cfg;
  cfg.s = 3;
  const ChimeState state = init_chime(data, cfg);
  const Vector mean = 0.5 * (a + b);
  const Vector along = (state.mu2_hat - mean).normalized();
  const Vector diff = (b - a).normalized();
  EXPECT_NEAR(std::abs(along.dot(diff)), 1.0, 1e-12);
  EXPECT_TRUE((state.mu1_hat + state.mu2_hat).isApprox(2.0 * mean));
  EXPECT_NEAR((state.mu2_hat - mean).norm(), (b - a).norm() / std::sqrt(2.0), 1e-12);
  EXPECT_EQ(state.omega, 0.5);
  EXPECT_EQ(state.iteration, 0);
}

TEST(InitChime, ConstantDataFallsBackToAnAxis) {
  const Dataset data = rows({{1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}});
  const ChimeState state = init_chime(data, ChimeConfig{});
  EXPECT_EQ(state.mu1_hat, state.mu2_hat);
  EXPECT_EQ(state.beta, Vector::Zero(2));
}

TEST(InitChime, LambdaRule) {
  const Dataset data = sample_unlabeled(DomainSpec::symmetric(Vector::Constant(20, 1.0), 1.0), 300, 2);
  ChimeConfig cfg;
  const ChimeState state = init_chime(data, cfg);
  const Vector diff = state.mu1_hat - state.mu2_hat;
  const double s = 2.0;
  const double expected = cfg.c1 * std::max(0.5, norm_2s(diff, 2)) / std::sqrt(s) +
                          cfg.c_lambda * std::sqrt(std::log(20.0) / 300.0);
  EXPECT_DOUBLE_EQ(state.lambda, expected);
  EXPECT_EQ(state.beta, soft_threshold(diff, expected));
}

TEST(InitChime, DiscriminantAlignsWithTruth) {
  SparseSetup setup;
  const Vector truth = 2.0 * setup.construction.mu_shift;
  int aligned = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Dataset data = sample_unlabeled(setup.shifted, 2000, derive_seed(seed, {9}));
    const ChimeState state = init_chime(data, ChimeConfig{});
    const Vector diff = state.mu1_hat - state.mu2_hat;
    aligned += std::abs(diff.dot(truth)) / (diff.norm() * truth.norm()) >= 0.5;
  }
  EXPECT_GE(aligned, 90);
}

TEST(RunChime, RecoversSparseSupport) {
  SparseSetup setup;
  int exact = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Dataset data = sample_unlabeled(setup.shifted, 2000, derive_seed(seed, {10}));
    const auto estimate = run_chime(data, 1.0, ChimeConfig{});
    exact += estimate.support == std::vector<std::int64_t>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  }
  EXPECT_GE(exact, 90);
}

TEST(RunChime, LambdaFollowsGeometricRecursion) {
  const Dataset data = sample_unlabeled(DomainSpec::symmetric(Vector::Constant(30, 1.0), 1.0), 400, 12);
  ChimeConfig cfg;
  cfg.t_max = 60;
  const auto estimate = run_chime(data, 1.0, cfg);
  ASSERT_EQ(estimate.trajectory.size(), 61u);
  const double floor = cfg.c_lambda * std::sqrt(std::log(30.0) / 400.0);
  const double fixed_point = floor / (1.0 - cfg.kappa);
  double lambda = estimate.trajectory.front().lambda;
  ASSERT_GT(lambda, fixed_point);
  for (std::size_t t = 1; t < estimate.trajectory.size(); ++t) {
    lambda = cfg.kappa * lambda + floor;
    EXPECT_EQ(estimate.trajectory[t].lambda, lambda);
    EXPECT_EQ(estimate.trajectory[t].iteration, static_cast<int>(t));
    if (t <= 20) {
      EXPECT_LT(estimate.trajectory[t].lambda, estimate.trajectory[t - 1].lambda);
    }
    EXPECT_LE(estimate.trajectory[t].lambda, estimate.trajectory[t - 1].lambda);
  }
  EXPECT_NEAR(estimate.trajectory.back().lambda, fixed_point, 1e-12);
  EXPECT_EQ(estimate.final_state.lambda, estimate.trajectory.back().lambda);
}

TEST(RunChime, DenseSignalKeepsEveryCoordinate) {
  const Dataset data = sample_unlabeled(DomainSpec::symmetric(Vector::Constant(20, 2.0), 1.0), 2000, 13);
  const auto estimate = run_chime(data, 1.0, ChimeConfig{});
  EXPECT_EQ(estimate.support.size(), 20u);
}

TEST(RunChime, LabelSwapSymmetry) {
  SparseSetup setup;
  const Dataset data = sample_unlabeled(setup.shifted, 2000, 77);
  const ChimeState start = init_chime(data, ChimeConfig{});
  for (int t_max : {1, 2, 5, 15}) {
    ChimeConfig forward, swapped;
    forward.t_max = swapped.t_max = t_max;
    forward.init_mu1 = start.mu1_hat;
    forward.init_mu2 = start.mu2_hat;
    swapped.init_mu1 = start.mu2_hat;
    swapped.init_mu2 = start.mu1_hat;
    const auto a = run_chime(data, 1.0, forward);
    const auto b = run_chime(data, 1.0, swapped);
    EXPECT_NEAR(a.final_state.omega, 1.0 - b.final_state.omega, 1e-12);
    EXPECT_LE((a.final_state.mu1_hat - b.final_state.mu2_hat).norm(), 1e-9);
    EXPECT_LE((a.final_state.mu2_hat - b.final_state.mu1_hat).norm(), 1e-9);
    EXPECT_EQ(a.support, b.support);
  }
}

TEST(RunChime, CollapseCarriesTrajectory) {
  // Means far from the data push every responsibility to one side.
  const Dataset data = rows({{0.0, 0.0}, {0.1, 0.0}, {0.0, 0.1}});
  ChimeConfig cfg;
  cfg.init_mu1 = Vector{{-50.0, -50.0}};
  cfg.init_mu2 = Vector{{1000.0, 1000.0}};
  try {
    run_chime(data, 1.0, cfg);
    FAIL() << "expected a collapse";
  } catch (const CollapsedResponsibilities& e) {
    ASSERT_EQ(e.trajectory().size(), 1u);
    EXPECT_EQ(e.trajectory().front().iteration, 0);
  }
}

TEST(RunChime, ConfigValidation) {
  const Dataset data = rows({{0.0, 0.0}, {1.0, 1.0}});
  ChimeConfig cfg;
  cfg.kappa = 1.0;
  EXPECT_THROW(init_chime(data, cfg), PreconditionError);
  cfg = ChimeConfig{};
  cfg.s = 3;
  EXPECT_THROW(init_chime(data, cfg), PreconditionError);
  EXPECT_THROW(init_chime(rows({{0.0, 0.0}}), ChimeConfig{}), PreconditionError);
}

TEST(SupportEstimate, Json) {
  SupportEstimate estimate;
  estimate.support = {0, 4};
  estimate.trajectory = {{0, 1.5, 3}, {1, 0.25, 2}};
  EXPECT_EQ(to_json(estimate), "{\"support\":[0,4],\"trajectory\":[[0,1.5,3],[1,0.25,2]]}");
}
