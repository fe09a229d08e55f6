#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ssr/domain_distance.hpp"
#include "ssr/errors.hpp"
#include "ssr/rng.hpp"

using namespace ssr;

namespace {

MeanQuadruple quad(Vector a, Vector b, Vector c, Vector d) { return {std::move(a), std::move(b), std::move(c), std::move(d)}; }

Vector random_unit(StreamEngine& engine, int d) {
  std::normal_distribution<double> normal;
  Vector v(d);
  for (int j = 0; j < d; ++j) v[j] = normal(engine);
  return v / v.norm();
}

}  // namespace

TEST(DNu, Examples) {
  const Vector a{{1.0, 0.0}}, b{{-1.0, 0.0}};
  EXPECT_EQ(d_nu(quad(a, b, a, b)), 0.0);
  EXPECT_NEAR(d_nu(quad(a, b, Vector{{1.0, 0.5}}, Vector{{-1.0, -0.5}})), 0.5 / std::sqrt(5.0), 1e-15);
  // Orthogonal construction with a = 1: mu = e1, shifted mean e2.
  const Vector e1 = Vector::Unit(5, 0), e2 = Vector::Unit(5, 1);
  EXPECT_NEAR(d_nu(quad(e1, -e1, e2, -e2)), std::sqrt(2.0) / 2.0, 1e-15);
  EXPECT_THROW(d_nu(quad(a, b, a, a)), DegenerateGap);
  EXPECT_THROW(d_nu(quad(a, b, a, Vector::Zero(3))), DimensionError);
}

TEST(DNu, RotationAndTranslationInvariant) {
  StreamEngine engine(3);
  std::normal_distribution<double> normal;
  for (int t = 0; t < 100; ++t) {
    MeanQuadruple q;
    for (Vector* v : {&q.mu1, &q.mu2, &q.mu1_shift, &q.mu2_shift}) {
      v->resize(3);
      for (int j = 0; j < 3; ++j) (*v)[j] = normal(engine);
    }
    const Eigen::Matrix3d rotation =
        Eigen::AngleAxisd(normal(engine), random_unit(engine, 3)).toRotationMatrix();
    const Vector shift{{normal(engine), normal(engine), normal(engine)}};
    const MeanQuadruple moved{rotation * q.mu1 + shift, rotation * q.mu2 + shift, rotation * q.mu1_shift + shift,
                              rotation * q.mu2_shift + shift};
    EXPECT_NEAR(d_nu(q), d_nu(moved), 1e-12 * (1.0 + d_nu(q)));
    EXPECT_GT(d_nu(q), 0.0);
  }
}

TEST(GaussianWasserstein, Examples) {
  EXPECT_EQ(gaussian_wasserstein(Vector::Ones(3), Vector::Ones(3)), 0.0);
  EXPECT_EQ(gaussian_wasserstein(Vector{{0.0, 0.0}}, Vector{{3.0, 4.0}}), 5.0);
  EXPECT_THROW(gaussian_wasserstein(Vector::Ones(2), Vector::Ones(3)), DimensionError);
}

TEST(GaussianWasserstein, TranslateCouplingCost) {
  StreamEngine engine(44);
  std::normal_distribution<double> normal;
  const Vector delta{{0.3, -1.2, 2.0}};
  double total = 0.0;
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    const Vector x{{normal(engine), normal(engine), normal(engine)}};
    total += (x - (x + delta)).norm();
  }
  EXPECT_NEAR(total / n, gaussian_wasserstein(Vector::Zero(3), delta), 1e-12);
}

TEST(WassersteinBound, Examples) {
  const Vector a{{1.0, 0.0}}, b{{-1.0, 0.0}};
  const auto zero = wasserstein_dnu_bound(0.0, quad(a, b, a, b));
  EXPECT_EQ(zero.bound, 0.0);
  const auto half = wasserstein_dnu_bound(0.5, quad(a, b, a, b));
  ASSERT_TRUE(half.refined_bound.has_value());
  EXPECT_DOUBLE_EQ(*half.refined_bound, 0.5);
  EXPECT_FALSE(wasserstein_dnu_bound(1.0, quad(a, b, a, b)).refined_bound.has_value());
  EXPECT_THROW(wasserstein_dnu_bound(-0.1, quad(a, b, a, b)), PreconditionError);
}

TEST(WassersteinBound, DominatesDNuOnRandomShifts) {
  StreamEngine engine(8);
  std::normal_distribution<double> normal;
  int violations = 0;
  for (int t = 0; t < 10000; ++t) {
    const int d = 1 + static_cast<int>(engine() % 6);
    Vector mu1(d), mu2(d);
    for (int j = 0; j < d; ++j) {
      mu1[j] = normal(engine);
      mu2[j] = normal(engine);
    }
    const double tau = 2.0 * engine.uniform01();
    const MeanQuadruple q{mu1, mu2, mu1 + tau * engine.uniform01() * random_unit(engine, d),
                          mu2 + tau * engine.uniform01() * random_unit(engine, d)};
    const auto r = wasserstein_dnu_bound(tau, q);
    violations += r.bound < d_nu(q);
    if (r.refined_bound) violations += *r.refined_bound < d_nu(q);
  }
  EXPECT_EQ(violations, 0);
}

TEST(MaximalInfoBound, Examples) {
  const Vector a{{1.0, 0.0}}, b{{-1.0, 0.0}};
  EXPECT_EQ(maximal_info_dnu_bound(1.0, quad(a, b, a, b)).bound, 0.0);
  EXPECT_DOUBLE_EQ(maximal_info_dnu_bound(1.25, quad(a, b, a, b)).bound, 0.25);
  EXPECT_THROW(maximal_info_dnu_bound(0.99, quad(a, b, a, b)), PreconditionError);
  EXPECT_THROW(maximal_info_dnu_bound(1.5, quad(a, b, a, b)), PreconditionError);
}

TEST(MaximalInfoBound, NonnegativeAndIncreasing) {
  StreamEngine engine(9);
  std::normal_distribution<double> normal;
  for (int t = 0; t < 1000; ++t) {
    const int d = 1 + static_cast<int>(engine() % 5);
    Vector mu1(d), mu2(d);
    for (int j = 0; j < d; ++j) {
      mu1[j] = normal(engine);
      mu2[j] = normal(engine);
    }
    const MeanQuadruple q{mu1, mu2, mu1, mu2};
    const double top = 1.0 + (mu1 - mu2).norm() / (2.0 * mu1.norm() + 2.0 * mu2.norm());
    double previous = -1.0;
    for (int k = 0; k < 20; ++k) {
      const double tau = 1.0 + (top - 1.0) * k / 20.0;
      const double bound = maximal_info_dnu_bound(tau, q).bound;
      EXPECT_GE(bound, 0.0);
      EXPECT_GT(bound, previous);
      previous = bound;
    }
  }
}

TEST(HDivergenceBound, Examples) {
  const Vector a{{1.0, 0.0}}, b{{-1.0, 0.0}};
  // 1 - 4/e is negative, so unit log argument is out of range; 1 - 4/e^2 gives log = 2.
  EXPECT_THROW(hdiv_dnu_bound(1.0 - 4.0 / std::exp(1.0), 1.0, quad(a, b, a, b)), PreconditionError);
  const auto two = hdiv_dnu_bound(1.0 - 4.0 / std::exp(2.0), 1.0, quad(a, b, a, b));
  EXPECT_NEAR(*two.alpha, std::sqrt(2.0), 1e-14);
  const auto near_zero = hdiv_dnu_bound(0.0, 1.0, quad(a, b, a, b));
  EXPECT_NEAR(*near_zero.alpha, 1.17741, 1e-5);
  EXPECT_GT(near_zero.bound, 0.0);
  const auto doubled = hdiv_dnu_bound(0.3, 2.0, quad(a, b, a, b));
  EXPECT_EQ(*doubled.alpha, 2.0 * *hdiv_dnu_bound(0.3, 1.0, quad(a, b, a, b)).alpha);
  EXPECT_THROW(hdiv_dnu_bound(1.0, 1.0, quad(a, b, a, b)), PreconditionError);
  EXPECT_THROW(hdiv_dnu_bound(0.5, 0.0, quad(a, b, a, b)), PreconditionError);
}

TEST(HDivergenceBound, RefinedFormNeedsSeparatedMeans) {
  const Vector far{{5.0, 0.0}};
  const auto r = hdiv_dnu_bound(0.1, 1.0, quad(far, -far, far, -far));
  ASSERT_TRUE(r.refined_bound.has_value());
  EXPECT_DOUBLE_EQ(*r.refined_bound, *r.alpha / (10.0 - 2.0 * *r.alpha));
  const Vector near{{0.5, 0.0}};
  EXPECT_FALSE(hdiv_dnu_bound(0.1, 1.0, quad(near, -near, near, -near)).refined_bound.has_value());
}

TEST(BoundReport, Json) {
  const Vector a{{1.0, 0.0}}, b{{-1.0, 0.0}};
  EXPECT_EQ(to_json(wasserstein_dnu_bound(0.5, quad(a, b, a, b))),
            "{\"measure\":\"wasserstein\",\"tau\":0.5,\"bound\":0.25,\"refined_bound\":0.5}");
  EXPECT_EQ(to_json(maximal_info_dnu_bound(1.0, quad(a, b, a, b))),
            "{\"measure\":\"maximal_info\",\"tau\":1,\"bound\":0}");
}
