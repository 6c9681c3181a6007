#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "errbound/bounds.hpp"
#include "errbound/decisions.hpp"
#include "errbound/error.hpp"
#include "errbound/rng.hpp"
#include "errbound/sequences.hpp"
#include "test_support.hpp"

namespace errbound {
namespace {

// Symbol at `position` of the sequence with lexicographic rank `rank`, decoded
// without the library helpers.
std::size_t symbol_of(std::size_t rank, std::size_t position, std::size_t length,
                      std::size_t classes) {
  for (std::size_t k = length - 1; k > position; --k) rank /= classes;
  return rank % classes;
}

struct PositionOracle {
  double bayes = 0.0;
  double model = 0.0;
};

// Bayes error at one position by enumerating every decision function X -> C;
// model error from the model's marginal argmax found by a separate scan.
PositionOracle enumerate_position(const SequenceTask& task, std::size_t position) {
  const auto& shape = task.shape();
  const std::size_t rows = task.pr().classes();
  const std::size_t X = shape.observations;
  const auto correct = [&](std::size_t x, std::size_t c) {
    double m = 0.0;
    for (std::size_t s = 0; s < rows; ++s) {
      if (symbol_of(s, position, shape.length, shape.classes) == c) m += task.pr()(s, x);
    }
    return m;
  };
  std::size_t functions = 1;
  for (std::size_t x = 0; x < X; ++x) functions *= shape.classes;
  PositionOracle out;
  out.bayes = std::numeric_limits<double>::infinity();
  for (std::size_t code = 0; code < functions; ++code) {
    std::size_t rest = code;
    double hit = 0.0;
    for (std::size_t x = 0; x < X; ++x) {
      hit += correct(x, rest % shape.classes);
      rest /= shape.classes;
    }
    out.bayes = std::min(out.bayes, 1.0 - hit);
  }
  double hit = 0.0;
  for (std::size_t x = 0; x < X; ++x) {
    std::vector<double> qm(shape.classes, 0.0);
    for (std::size_t s = 0; s < rows; ++s) {
      qm[symbol_of(s, position, shape.length, shape.classes)] += task.q()(s, x);
    }
    std::size_t pick = 0;
    for (std::size_t c = 1; c < shape.classes; ++c) {
      if (qm[c] > qm[pick]) pick = c;
    }
    hit += correct(x, pick);
  }
  out.model = 1.0 - hit;
  return out;
}

SequenceShape random_shape(CounterRng& rng, std::size_t max_n, std::size_t max_c,
                           std::size_t max_x) {
  return {1 + rng.below(max_n), 2 + rng.below(max_c - 1), 1 + rng.below(max_x)};
}

TEST(HammingLoss, Examples) {
  const ClassSequence a = {0, 1, 2, 1};
  const ClassSequence b = {0, 1, 0, 1};
  const ClassSequence c = {1, 0, 1, 0};
  EXPECT_EQ(hamming_loss(a, a), 0.0);
  EXPECT_EQ(hamming_loss(a, c), 1.0);
  EXPECT_EQ(hamming_loss(a, b), 0.25);
  const ClassSequence short_seq = {0, 1};
  try {
    hamming_loss(a, short_seq);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::LengthMismatch);
  }
}

TEST(SequenceShape, CapAndIndexing) {
  EXPECT_EQ((SequenceShape{2, 3, 1}.sequence_count()), 9u);
  EXPECT_EQ((SequenceShape{12, 2, 1}.sequence_count()), 4096u);
  EXPECT_THROW((SequenceShape{12, 3, 1}.sequence_count()), Error);
  const SequenceShape shape{3, 3, 1};
  for (std::size_t i = 0; i < 27; ++i) EXPECT_EQ(sequence_index(shape, sequence_at(shape, i)), i);
  EXPECT_EQ(sequence_at(shape, 5), (ClassSequence{0, 1, 2}));
}

TEST(PositionMarginal, FactorizedAndPointMass) {
  const SequenceShape shape{3, 2, 1};
  const std::vector<std::vector<double>> factors = {{0.3, 0.7}, {0.9, 0.1}, {0.5, 0.5}};
  std::vector<double> product(8);
  for (std::size_t s = 0; s < 8; ++s) {
    const auto seq = sequence_at(shape, s);
    product[s] = factors[0][seq[0]] * factors[1][seq[1]] * factors[2][seq[2]];
  }
  for (std::size_t n = 0; n < 3; ++n) {
    const auto m = position_marginal(shape, product, n);
    EXPECT_NEAR(m[0], factors[n][0], 1e-15);
    EXPECT_NEAR(m[1], factors[n][1], 1e-15);
  }
  std::vector<double> point(8, 0.0);
  point[sequence_index(shape, ClassSequence{1, 0, 1})] = 1.0;
  EXPECT_EQ(position_marginal(shape, point, 0), (std::vector<double>{0, 1}));
  EXPECT_EQ(position_marginal(shape, point, 1), (std::vector<double>{1, 0}));
}

TEST(PositionMarginal, NormalizedOnRandomTasks) {
  for (std::uint64_t i = 0; i < 200; ++i) {
    CounterRng rng(101, i);
    const auto shape = random_shape(rng, 3, 3, 4);
    const auto task = random_sequence_task(rng, shape, 0.2, RandomModel::Independent);
    for (std::size_t x = 0; x < shape.observations; ++x) {
      for (std::size_t n = 0; n < shape.length; ++n) {
        double sum = 0.0;
        for (double v : position_marginal(task, x, n)) sum += v;
        EXPECT_NEAR(sum, 1.0, 1e-12);
      }
    }
  }
}

TEST(ExpectedSequenceError, Examples) {
  const SequenceShape shape{2, 3, 1};
  std::vector<double> point(9, 0.0);
  const ClassSequence target = {2, 1};
  point[sequence_index(shape, target)] = 1.0;
  EXPECT_EQ(expected_sequence_error(shape, point, target), 0.0);
  EXPECT_EQ(expected_sequence_error_direct(shape, point, target), 0.0);

  const std::vector<double> uniform(9, 1.0 / 9.0);
  for (std::size_t s = 0; s < 9; ++s) {
    const auto q = sequence_at(shape, s);
    EXPECT_NEAR(expected_sequence_error(shape, uniform, q), 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(expected_sequence_error_direct(shape, uniform, q), 2.0 / 3.0, 1e-15);
  }
}

TEST(ExpectedSequenceError, TwoPathsAgree) {
  for (std::uint64_t i = 0; i < 300; ++i) {
    CounterRng rng(103, i);
    const auto shape = random_shape(rng, 3, 3, 3);
    const auto task = random_sequence_task(rng, shape, 0.3, RandomModel::Independent);
    const std::size_t rows = shape.sequence_count();
    for (std::size_t x = 0; x < shape.observations; ++x) {
      for (std::size_t s = 0; s < rows; ++s) {
        const auto seq = sequence_at(shape, s);
        EXPECT_NEAR(expected_sequence_error(task, x, seq),
                    expected_sequence_error_direct(task, x, seq), 1e-12);
      }
    }
  }
}

TEST(SequenceTask, EnforcesPerPositionCap) {
  const SequenceShape shape{2, 2, 1};
  // Position 0 marginal is (0.5, 0.5): Bayes error 0.5 there.
  const auto pr = JointDistribution::from_flat(4, 1, {0.5, 0.0, 0.5, 0.0});
  try {
    SequenceTask::from_joint(shape, 0.2, pr, pr);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DomainError);
  }
  const auto wrong = JointDistribution::from_flat(2, 1, {0.5, 0.5});
  EXPECT_THROW(SequenceTask::from_joint(shape, 0.2, wrong, wrong), Error);
}

TEST(SequenceErrors, MatchedModelHasNoMismatch) {
  for (std::uint64_t i = 0; i < 100; ++i) {
    CounterRng rng(107, i);
    const auto shape = random_shape(rng, 3, 3, 4);
    const auto pr = random_sequence_truth(rng, shape, 0.2);
    const auto task = SequenceTask::from_joint(shape, 0.2, pr, pr);
    const auto e = sequence_errors(task);
    for (double d : e.per_position_delta) EXPECT_EQ(d, 0.0);
    EXPECT_EQ(e.bayes, e.model);
    for (double b : e.per_position_bayes) EXPECT_LE(b, 0.2 + 1e-12);
  }
}

TEST(SequenceErrors, LengthOneReducesToDecisions) {
  for (std::uint64_t i = 0; i < 200; ++i) {
    CounterRng rng(109, i);
    const SequenceShape shape{1, 2 + rng.below(4), 1 + rng.below(5)};
    const auto task = random_sequence_task(rng, shape, 0.3, RandomModel::Perturbed);
    const auto e = sequence_errors(task);
    const auto report = mismatch(task.pr(), task.q());
    EXPECT_EQ(e.bayes, report.bayes_error);
    EXPECT_EQ(e.bayes, bayes_error(task.pr()));
    EXPECT_EQ(e.model, report.model_error);
    EXPECT_EQ(e.mean_delta, report.mismatch);
    const auto chain = kl_chain(task);
    EXPECT_EQ(chain.kl_joint, kl_divergence(task.pr(), task.q()));
    EXPECT_EQ(chain.kl_marginal_avg, chain.kl_conditional);
    EXPECT_EQ(chain.h_of_mean, bound_h(report.mismatch, BoundThreshold(0.3)));
  }
}

TEST(SequenceErrors, MatchesExhaustiveDecisionEnumeration) {
  for (std::uint64_t i = 0; i < 300; ++i) {
    CounterRng rng(113, i);
    const SequenceShape shape = i < 150 ? SequenceShape{2, 2, 2} : random_shape(rng, 3, 3, 3);
    const auto task = random_sequence_task(rng, shape, 0.25, RandomModel::Perturbed);
    const auto e = sequence_errors(task);
    double delta_sum = 0.0;
    for (std::size_t n = 0; n < shape.length; ++n) {
      const auto oracle = enumerate_position(task, n);
      EXPECT_NEAR(e.per_position_bayes[n], oracle.bayes, 1e-12);
      EXPECT_NEAR(e.per_position_delta[n], oracle.model - oracle.bayes, 1e-12);
      EXPECT_GE(e.per_position_delta[n], -1e-12);
      delta_sum += e.per_position_delta[n];
    }
    EXPECT_NEAR(e.mean_delta, delta_sum / static_cast<double>(shape.length), 1e-12);
    EXPECT_NEAR(e.model - e.bayes, e.mean_delta, 1e-12);
  }
}

TEST(KlChain, MatchedModelIsAllZero) {
  CounterRng rng(127, 0);
  const SequenceShape shape{3, 2, 3};
  const auto pr = random_sequence_truth(rng, shape, 0.2);
  const auto chain = kl_chain(SequenceTask::from_joint(shape, 0.2, pr, pr));
  EXPECT_EQ(chain.kl_joint, 0.0);
  EXPECT_EQ(chain.kl_conditional, 0.0);
  EXPECT_EQ(chain.kl_marginal_avg, 0.0);
  EXPECT_EQ(chain.h_avg, 0.0);
  EXPECT_EQ(chain.h_of_mean, 0.0);
}

TEST(KlChain, OrderingHoldsOnRandomTasks) {
  for (std::uint64_t i = 0; i < 1000; ++i) {
    CounterRng rng(131, i);
    const auto shape = random_shape(rng, 3, 3, 4);
    const auto model = i % 2 == 0 ? RandomModel::Independent : RandomModel::Perturbed;
    const auto chain = kl_chain(random_sequence_task(rng, shape, 0.2, model));
    const auto links = chain.links();
    for (std::size_t k = 0; k < links.size(); ++k) EXPECT_TRUE(links[k]) << "link " << k << " task " << i;
  }
}

TEST(KlChain, InfiniteConditionalStillOrders) {
  const SequenceShape shape{1, 2, 2};
  const auto pr = JointDistribution::from_flat(2, 2, {0.45, 0.05, 0.05, 0.45});
  const auto q = JointDistribution::from_flat(2, 2, {0.5, 0.0, 0.0, 0.5});
  const auto chain = kl_chain(SequenceTask::from_joint(shape, 0.2, pr, q));
  EXPECT_TRUE(std::isinf(chain.kl_joint));
  EXPECT_TRUE(std::isinf(chain.kl_conditional));
  EXPECT_TRUE(chain.holds());
}

TEST(EmpiricalJoint, Counting) {
  const SequenceShape shape{2, 2, 2};
  const std::vector<LabeledSequence> one = {{{1, 0}, 1}};
  const auto point = empirical_joint(shape, one);
  EXPECT_EQ(point(sequence_index(shape, ClassSequence{1, 0}), 1), 1.0);

  const std::vector<LabeledSequence> samples = {
      {{0, 0}, 0}, {{0, 0}, 0}, {{1, 1}, 1}, {{0, 0}, 0}};
  const auto d = empirical_joint(shape, samples);
  EXPECT_EQ(d(0, 0), 0.75);
  EXPECT_EQ(d(3, 1), 0.25);

  std::vector<LabeledSequence> doubled = samples;
  doubled.insert(doubled.end(), samples.begin(), samples.end());
  EXPECT_EQ(empirical_joint(shape, doubled), d);

  try {
    empirical_joint(shape, std::vector<LabeledSequence>{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptySample);
  }
}

TEST(CeLoss, Examples) {
  const SequenceShape shape{3, 2, 1};
  const std::vector<LabeledSequence> two = {{{0, 1, 0}, 0}, {{1, 1, 1}, 0}};
  const auto uniform = JointDistribution::from_flat(8, 1, std::vector<double>(8, 0.125));
  EXPECT_NEAR(ce_loss(shape, two, uniform), std::log(8.0), 1e-15);

  const auto empirical = empirical_joint(shape, two);
  EXPECT_NEAR(ce_loss(shape, two, empirical), entropy(empirical.weights()), 1e-15);

  std::vector<double> w(8, 0.0);
  w[sequence_index(shape, ClassSequence{0, 1, 0})] = 1.0;
  const auto partial = JointDistribution::from_flat(8, 1, w);
  EXPECT_TRUE(std::isinf(ce_loss(shape, two, partial)));
}

TEST(CeLoss, EqualsCrossEntropyAgainstEmpirical) {
  for (std::uint64_t i = 0; i < 300; ++i) {
    CounterRng rng(137, i);
    const auto shape = random_shape(rng, 3, 3, 3);
    const std::size_t rows = shape.sequence_count();
    const std::size_t M = 1 + rng.below(40);
    std::vector<LabeledSequence> samples;
    for (std::size_t m = 0; m < M; ++m) {
      samples.push_back({sequence_at(shape, rng.below(rows)), rng.below(shape.observations)});
    }
    const auto q = JointDistribution::from_flat(rows, shape.observations,
                                                uniform_simplex(rng, rows * shape.observations));
    EXPECT_NEAR(ce_loss(shape, samples, q),
                cross_entropy(empirical_joint(shape, samples).weights(), q.weights()), 1e-12);
  }
}

TEST(CeErrorBound, MatchedModelHolds) {
  CounterRng rng(139, 0);
  const SequenceShape shape{2, 3, 2};
  const auto pr = random_sequence_truth(rng, shape, 0.05);
  const auto check = ce_error_bound_check(SequenceTask::from_joint(shape, 0.05, pr, pr));
  EXPECT_NEAR(check.lhs, entropy(pr.weights()), 1e-15);
  EXPECT_LT(check.rhs, check.lhs);
  EXPECT_TRUE(check.holds);
}

TEST(CeErrorBound, HoldsOnRandomTasks) {
  for (std::uint64_t i = 0; i < 1000; ++i) {
    CounterRng rng(149, i);
    const auto shape = random_shape(rng, 3, 3, 4);
    const auto model = i % 2 == 0 ? RandomModel::Independent : RandomModel::Perturbed;
    const auto check = ce_error_bound_check(random_sequence_task(rng, shape, 0.05, model));
    EXPECT_TRUE(check.holds) << i << ' ' << check.lhs << ' ' << check.rhs;
  }
}

TEST(CeErrorBound, InfiniteCrossEntropyHolds) {
  const SequenceShape shape{1, 2, 2};
  const auto pr = JointDistribution::from_flat(2, 2, {0.48, 0.01, 0.01, 0.5});
  const auto q = JointDistribution::from_flat(2, 2, {0.5, 0.0, 0.0, 0.5});
  const auto check = ce_error_bound_check(SequenceTask::from_joint(shape, 0.05, pr, q));
  EXPECT_TRUE(std::isinf(check.lhs));
  EXPECT_TRUE(check.holds);
  EXPECT_THROW(ce_error_bound_check(SequenceTask::from_joint(shape, 0.0, q, q)), Error);
}

TEST(PplWerDemo, MatchedPriorIsMinimal) {
  CounterRng rng(151, 0);
  const SequenceShape shape{2, 3, 3};
  const auto pr = random_sequence_truth(rng, shape, 0.05);
  const auto truth_prior = class_prior(pr);
  std::vector<SequenceTask> tasks = {SequenceTask::from_prior(shape, 0.05, pr, truth_prior)};
  for (int m = 0; m < 49; ++m) {
    tasks.push_back(SequenceTask::from_prior(shape, 0.05, pr, random_sequence_prior(rng, truth_prior)));
  }
  const auto rows = ppl_wer_demo(tasks);
  ASSERT_EQ(rows.size(), 50u);
  const double bayes = sequence_errors(tasks.front()).bayes;
  EXPECT_NEAR(rows[0].hamming_error, bayes, 1e-15);
  EXPECT_NEAR(rows[0].log_ppl, entropy(truth_prior.mass()), 1e-15);
  for (const auto& row : rows) {
    EXPECT_TRUE(row.holds) << row.model_id;
    EXPECT_GE(row.log_ppl, rows[0].log_ppl - 1e-12);
    EXPECT_NEAR(row.log_ppl_per_token, row.log_ppl / 2.0, 1e-15);
  }
}

TEST(PplWerDemo, RejectsMixedTruthsOrMissingPrior) {
  CounterRng rng(157, 0);
  const SequenceShape shape{2, 2, 2};
  const auto a = random_sequence_truth(rng, shape, 0.05);
  const auto b = random_sequence_truth(rng, shape, 0.05);
  const std::vector<SequenceTask> mixed = {
      SequenceTask::from_prior(shape, 0.05, a, class_prior(a)),
      SequenceTask::from_prior(shape, 0.05, b, class_prior(b))};
  EXPECT_THROW(ppl_wer_demo(mixed), Error);
  const std::vector<SequenceTask> joint = {SequenceTask::from_joint(shape, 0.05, a, a)};
  EXPECT_THROW(ppl_wer_demo(joint), Error);
}

}  // namespace
}  // namespace errbound
