#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "errbound/distributions.hpp"
#include "errbound/error.hpp"
#include "errbound/frontier.hpp"
#include "errbound/rng.hpp"
#include "test_support.hpp"

namespace errbound {
namespace {

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no errbound::Error thrown";
  return ErrorKind::ParseError;
}

const std::vector<std::vector<double>> kUniform2x2 = {{0.25, 0.25}, {0.25, 0.25}};

TEST(Validate, AcceptsUniformTable) {
  const auto d = JointDistribution::validate(kUniform2x2);
  EXPECT_EQ(d.classes(), 2u);
  EXPECT_EQ(d.observations(), 2u);
  EXPECT_DOUBLE_EQ(d(1, 0), 0.25);
}

TEST(Validate, RejectsNegativeMass) {
  EXPECT_EQ(kind_of([] { JointDistribution::validate({{-0.1, 0.6}, {0.25, 0.25}}); }),
            ErrorKind::NegativeMass);
}

TEST(Validate, RejectsUnnormalized) {
  EXPECT_EQ(kind_of([] { JointDistribution::validate({{0.2, 0.2}, {0.25, 0.25}}); }),
            ErrorKind::NotNormalized);
}

TEST(Validate, RejectsBadShape) {
  EXPECT_EQ(kind_of([] { JointDistribution::validate({{1.0}}); }), ErrorKind::BadShape);
  EXPECT_EQ(kind_of([] { JointDistribution::validate({{0.5, 0.25}, {0.25}}); }),
            ErrorKind::BadShape);
}

TEST(Validate, RenormalizesFloatDust) {
  const auto d = JointDistribution::validate({{0.5 + 4e-10, 0.0}, {0.0, 0.5}});
  double total = 0.0;
  for (double v : d.weights()) total += v;
  EXPECT_NEAR(total, 1.0, kNormTolerance);
}

TEST(ObservationMarginal, Examples) {
  const auto px = observation_marginal(JointDistribution::validate(kUniform2x2));
  EXPECT_DOUBLE_EQ(px[0], 0.5);
  EXPECT_DOUBLE_EQ(px[1], 0.5);

  const auto point = observation_marginal(JointDistribution::validate({{0, 1}, {0, 0}}));
  EXPECT_EQ(point, (std::vector<double>{0.0, 1.0}));

  const auto family = build_family_point(0.01, 0.8, 1e-6);
  const auto fx = observation_marginal(family.pr);
  EXPECT_NEAR(fx[0], 0.95, 1e-12);
  EXPECT_NEAR(fx[1], 0.05, 1e-12);
}

TEST(Posterior, Examples) {
  const auto uniform = posterior(JointDistribution::validate(kUniform2x2), 0);
  EXPECT_DOUBLE_EQ(uniform[0], 0.5);

  const auto family = build_family_point(0.01, 0.8, 1e-6);
  const auto post = posterior(family.pr, 1);
  EXPECT_NEAR(post[0], 0.0, 1e-12);
  EXPECT_NEAR(post[1], 0.8, 1e-12);
  EXPECT_NEAR(post[2], 0.2, 1e-12);

  const auto zero_column = JointDistribution::validate({{0.5, 0.0}, {0.5, 0.0}});
  EXPECT_EQ(kind_of([&] { posterior(zero_column, 1); }), ErrorKind::ZeroMassObservation);
}

TEST(ClassPrior, Examples) {
  EXPECT_DOUBLE_EQ(class_prior(JointDistribution::validate(kUniform2x2))[0], 0.5);

  const auto family = class_prior(build_family_point(0.01, 0.8, 1e-6).pr);
  EXPECT_NEAR(family[0], 0.95, 1e-12);
  EXPECT_NEAR(family[1], 0.04, 1e-12);
  EXPECT_NEAR(family[2], 0.01, 1e-12);

  const auto point = class_prior(JointDistribution::validate({{1, 0}, {0, 0}}));
  EXPECT_EQ(point[0], 1.0);
  EXPECT_EQ(point[1], 0.0);
}

TEST(JointFromPosterior, Examples) {
  const auto uniform_model = PosteriorModel::from_columns({{0.5, 0.5}, {0.5, 0.5}});
  const std::vector<double> half = {0.5, 0.5};
  EXPECT_EQ(joint_from_posterior(uniform_model, half),
            JointDistribution::validate(kUniform2x2));

  const auto identity = PosteriorModel::from_columns({{1, 0}, {0, 1}});
  const std::vector<double> px = {0.3, 0.7};
  const auto diag = joint_from_posterior(identity, px);
  EXPECT_DOUBLE_EQ(diag(0, 0), 0.3);
  EXPECT_DOUBLE_EQ(diag(1, 1), 0.7);
  EXPECT_DOUBLE_EQ(diag(0, 1), 0.0);

  const std::vector<double> wrong = {1.0};
  EXPECT_EQ(kind_of([&] { joint_from_posterior(identity, wrong); }), ErrorKind::ShapeMismatch);
}

TEST(JointFromPosterior, RoundTripsThroughPosterior) {
  for (std::uint64_t i = 0; i < 200; ++i) {
    CounterRng rng(7, i);
    const std::size_t C = 2 + rng.below(4);
    const std::size_t X = 1 + rng.below(5);
    std::vector<std::vector<double>> columns(X);
    for (auto& col : columns) col = uniform_simplex(rng, C);
    const auto model = PosteriorModel::from_columns(columns);
    const auto px = dirichlet(rng, X, 0.3);
    const auto joint = joint_from_posterior(model, px);
    const auto marginal = observation_marginal(joint);
    for (std::size_t x = 0; x < X; ++x) {
      if (marginal[x] <= 0.0) continue;
      const auto back = posterior(joint, x);
      for (std::size_t c = 0; c < C; ++c) EXPECT_NEAR(back[c], model(c, x), 1e-12);
    }
  }
}

TEST(Marginals, AlwaysNormalized) {
  for (std::uint64_t i = 0; i < 200; ++i) {
    CounterRng rng(11, i);
    const auto d = testing::random_joint(rng, 2 + rng.below(5), 1 + rng.below(6));
    double sum = 0.0;
    for (double v : observation_marginal(d)) sum += v;
    EXPECT_NEAR(sum, 1.0, 1e-12);
    sum = 0.0;
    const auto prior = class_prior(d);
    for (double v : prior.mass()) sum += v;
    EXPECT_NEAR(sum, 1.0, 1e-12);
    sum = 0.0;
    for (double v : posterior(d, 0)) sum += v;
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(KlDivergence, Examples) {
  const std::vector<double> p = {0.3, 0.7};
  EXPECT_EQ(kl_divergence(p, p), 0.0);

  const std::vector<double> point = {1.0, 0.0};
  const std::vector<double> half = {0.5, 0.5};
  EXPECT_NEAR(kl_divergence(point, half), std::numbers::ln2, 1e-15);
  EXPECT_EQ(kl_divergence(half, point), std::numeric_limits<double>::infinity());

  const std::vector<double> three = {0.2, 0.3, 0.5};
  EXPECT_EQ(kind_of([&] { kl_divergence(p, three); }), ErrorKind::ShapeMismatch);
}

TEST(KlDivergence, NonNegativeAndZeroOnlyOnEquality) {
  for (std::uint64_t i = 0; i < 500; ++i) {
    CounterRng rng(13, i);
    const std::size_t n = 2 + rng.below(10);
    const auto p = uniform_simplex(rng, n);
    const auto q = uniform_simplex(rng, n);
    double max_diff = 0.0;
    for (std::size_t k = 0; k < n; ++k) max_diff = std::max(max_diff, std::abs(p[k] - q[k]));
    const double kl = kl_divergence(p, q);
    EXPECT_GE(kl, -1e-12);
    if (max_diff > 1e-9) EXPECT_GT(kl, 0.0);
    EXPECT_EQ(kl_divergence(p, p), 0.0);
  }
}

TEST(Entropy, Examples) {
  const std::vector<double> half = {0.5, 0.5};
  EXPECT_NEAR(entropy(half), std::numbers::ln2, 1e-15);

  const std::vector<double> skew = {0.9, 0.1};
  EXPECT_NEAR(cross_entropy(skew, half), std::numbers::ln2, 1e-15);

  const std::vector<double> point = {1.0, 0.0};
  EXPECT_EQ(cross_entropy(half, point), std::numeric_limits<double>::infinity());
}

TEST(Entropy, DecomposesKl) {
  for (std::uint64_t i = 0; i < 500; ++i) {
    CounterRng rng(17, i);
    const std::size_t n = 2 + rng.below(12);
    const auto p = dirichlet(rng, n, 0.5);
    const auto q = uniform_simplex(rng, n);
    EXPECT_NEAR(cross_entropy(p, p), entropy(p), 1e-12);
    EXPECT_NEAR(cross_entropy(p, q) - entropy(p) - kl_divergence(p, q), 0.0, 1e-10);
  }
}

TEST(LogBase, RescalesByLnBase) {
  const std::vector<double> point = {1.0, 0.0};
  const std::vector<double> half = {0.5, 0.5};
  EXPECT_NEAR(kl_divergence(point, half, LogBase(2.0)), 1.0, 1e-15);
  EXPECT_NEAR(entropy(half, LogBase(10.0)), std::log10(2.0), 1e-15);
  EXPECT_EQ(LogBase::parse("e").label(), "e");
  EXPECT_EQ(LogBase::parse("2").label(), "2");
  EXPECT_EQ(kind_of([] { LogBase(1.0); }), ErrorKind::DomainError);
  EXPECT_EQ(kind_of([] { LogBase::parse("two"); }), ErrorKind::DomainError);
}

TEST(JointWithPrior, MatchedPriorReproducesTruth) {
  for (std::uint64_t i = 0; i < 100; ++i) {
    CounterRng rng(19, i);
    const auto pr = testing::random_joint(rng, 2 + rng.below(5), 1 + rng.below(6));
    const auto q = joint_with_prior(class_prior(pr), pr);
    for (std::size_t k = 0; k < pr.weights().size(); ++k) {
      EXPECT_NEAR(q.weights()[k], pr.weights()[k], 1e-15);
    }
  }
}

}  // namespace
}  // namespace errbound
