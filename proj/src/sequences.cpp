#include "errbound/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "errbound/bounds.hpp"
#include "errbound/decisions.hpp"
#include "errbound/error.hpp"
#include "errbound/rng.hpp"

namespace errbound {
namespace {

constexpr double kPerPositionSlack = 1e-12;

double log_uniform(CounterRng& rng, double lo, double hi) {
  return std::exp(rng.uniform(std::log(lo), std::log(hi)));
}

// C^(N - 1 - position): the weight of `position` in a lexicographic rank.
std::size_t place_value(const SequenceShape& shape, std::size_t position) {
  std::size_t v = 1;
  for (std::size_t i = position + 1; i < shape.length; ++i) v *= shape.classes;
  return v;
}

std::vector<double> joint_column(const JointDistribution& d, std::size_t x) {
  std::vector<double> column(d.classes());
  for (std::size_t s = 0; s < d.classes(); ++s) column[s] = d(s, x);
  return column;
}

double column_mass(std::span<const double> column) {
  double total = 0.0;
  for (double v : column) total += v;
  return total;
}

std::vector<double> per_position_bayes_errors(const SequenceShape& shape,
                                              const JointDistribution& pr) {
  std::vector<double> errors(shape.length, 0.0);
  for (std::size_t x = 0; x < shape.observations; ++x) {
    const std::vector<double> column = joint_column(pr, x);
    const double px = column_mass(column);
    if (px <= 0.0) continue;
    for (std::size_t n = 0; n < shape.length; ++n) {
      const std::vector<double> m = position_marginal(shape, column, n);
      errors[n] += px - *std::max_element(m.begin(), m.end());
    }
  }
  return errors;
}

}  // namespace

std::size_t SequenceShape::sequence_count() const {
  if (length < 1) throw Error(ErrorKind::DomainError, "sequence length must be at least 1");
  if (classes < 2) throw Error(ErrorKind::DomainError, "need at least two classes");
  if (observations < 1) throw Error(ErrorKind::DomainError, "need at least one observation");
  std::size_t count = 1;
  for (std::size_t n = 0; n < length; ++n) {
    count *= classes;
    if (count > kMaxSequences) {
      throw Error(ErrorKind::DomainError,
                  std::to_string(classes) + "^" + std::to_string(length) + " sequences exceed " +
                      std::to_string(kMaxSequences));
    }
  }
  return count;
}

std::size_t sequence_index(const SequenceShape& shape, std::span<const std::size_t> sequence) {
  if (sequence.size() != shape.length) {
    throw Error(ErrorKind::LengthMismatch, "sequence length " + std::to_string(sequence.size()) +
                                               " != " + std::to_string(shape.length));
  }
  std::size_t index = 0;
  for (std::size_t symbol : sequence) {
    if (symbol >= shape.classes) throw Error(ErrorKind::BadShape, "class symbol out of range");
    index = index * shape.classes + symbol;
  }
  return index;
}

ClassSequence sequence_at(const SequenceShape& shape, std::size_t index) {
  ClassSequence seq(shape.length);
  for (std::size_t n = shape.length; n-- > 0;) {
    seq[n] = index % shape.classes;
    index /= shape.classes;
  }
  return seq;
}

SequenceTask::SequenceTask(SequenceShape shape, double t, JointDistribution pr,
                           JointDistribution q, std::optional<PriorDistribution> prior)
    : shape_(shape), t_(t), pr_(std::move(pr)), q_(std::move(q)), q_prior_(std::move(prior)) {
  const BoundThreshold threshold(t);
  const std::size_t count = shape_.sequence_count();
  if (pr_.classes() != count || pr_.observations() != shape_.observations) {
    throw Error(ErrorKind::ShapeMismatch, "true table does not match the sequence shape");
  }
  if (q_.classes() != count || q_.observations() != shape_.observations) {
    throw Error(ErrorKind::ShapeMismatch, "model table does not match the sequence shape");
  }
  const std::vector<double> errors = per_position_bayes_errors(shape_, pr_);
  for (std::size_t n = 0; n < errors.size(); ++n) {
    if (errors[n] > threshold.value() + kPerPositionSlack) {
      throw Error(ErrorKind::DomainError, "Bayes error " + std::to_string(errors[n]) +
                                              " at position " + std::to_string(n) +
                                              " exceeds t=" + std::to_string(t));
    }
  }
}

SequenceTask SequenceTask::from_joint(SequenceShape shape, double t, JointDistribution pr,
                                      JointDistribution q) {
  return SequenceTask(shape, t, std::move(pr), std::move(q), std::nullopt);
}

SequenceTask SequenceTask::from_conditional(SequenceShape shape, double t, JointDistribution pr,
                                            const PosteriorModel& q) {
  JointDistribution joint = joint_from_posterior(q, observation_marginal(pr));
  return SequenceTask(shape, t, std::move(pr), std::move(joint), std::nullopt);
}

SequenceTask SequenceTask::from_prior(SequenceShape shape, double t, JointDistribution pr,
                                      PriorDistribution q_prior) {
  JointDistribution joint = joint_with_prior(q_prior, pr);
  return SequenceTask(shape, t, std::move(pr), std::move(joint), std::move(q_prior));
}

std::vector<double> SequenceTask::true_conditional(std::size_t x) const {
  return posterior(pr_, x);
}

std::vector<double> SequenceTask::model_conditional(std::size_t x) const {
  std::vector<double> column = joint_column(q_, x);
  const double mass = column_mass(column);
  if (mass <= 0.0) return std::vector<double>(column.size(), 0.0);
  for (double& v : column) v /= mass;
  return column;
}

double hamming_loss(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::LengthMismatch, "sequences of length " + std::to_string(a.size()) +
                                               " and " + std::to_string(b.size()));
  }
  if (a.empty()) throw Error(ErrorKind::LengthMismatch, "empty sequences");
  std::size_t differing = 0;
  for (std::size_t n = 0; n < a.size(); ++n) differing += a[n] != b[n] ? 1 : 0;
  return static_cast<double>(differing) / static_cast<double>(a.size());
}

std::vector<double> position_marginal(const SequenceShape& shape,
                                      std::span<const double> over_sequences,
                                      std::size_t position) {
  if (position >= shape.length) throw Error(ErrorKind::DomainError, "position out of range");
  if (over_sequences.size() != shape.sequence_count()) {
    throw Error(ErrorKind::ShapeMismatch, "distribution does not cover every sequence");
  }
  const std::size_t stride = place_value(shape, position);
  std::vector<double> marginal(shape.classes, 0.0);
  for (std::size_t s = 0; s < over_sequences.size(); ++s) {
    marginal[(s / stride) % shape.classes] += over_sequences[s];
  }
  return marginal;
}

std::vector<double> position_marginal(const SequenceTask& task, std::size_t x,
                                      std::size_t position) {
  return position_marginal(task.shape(), task.true_conditional(x), position);
}

double expected_sequence_error(const SequenceShape& shape, std::span<const double> conditional,
                               std::span<const std::size_t> sequence) {
  (void)sequence_index(shape, sequence);
  double sum = 0.0;
  for (std::size_t n = 0; n < shape.length; ++n) {
    sum += position_marginal(shape, conditional, n)[sequence[n]];
  }
  return 1.0 - sum / static_cast<double>(shape.length);
}

double expected_sequence_error_direct(const SequenceShape& shape,
                                      std::span<const double> conditional,
                                      std::span<const std::size_t> sequence) {
  (void)sequence_index(shape, sequence);
  if (conditional.size() != shape.sequence_count()) {
    throw Error(ErrorKind::ShapeMismatch, "distribution does not cover every sequence");
  }
  double sum = 0.0;
  for (std::size_t s = 0; s < conditional.size(); ++s) {
    sum += conditional[s] * hamming_loss(sequence, sequence_at(shape, s));
  }
  return sum;
}

double expected_sequence_error(const SequenceTask& task, std::size_t x,
                               std::span<const std::size_t> sequence) {
  return expected_sequence_error(task.shape(), task.true_conditional(x), sequence);
}

double expected_sequence_error_direct(const SequenceTask& task, std::size_t x,
                                      std::span<const std::size_t> sequence) {
  return expected_sequence_error_direct(task.shape(), task.true_conditional(x), sequence);
}

SequenceErrors sequence_errors(const SequenceTask& task) {
  const SequenceShape& shape = task.shape();
  const std::size_t N = shape.length;
  SequenceErrors out;
  out.per_position_bayes.assign(N, 0.0);
  out.per_position_delta.assign(N, 0.0);
  std::vector<double> per_position_model(N, 0.0);

  // Unnormalized joint columns keep N = 1 bit-identical with the
  // single-observation decision module.
  for (std::size_t x = 0; x < shape.observations; ++x) {
    const std::vector<double> truth = joint_column(task.pr(), x);
    const double px = column_mass(truth);
    if (px <= 0.0) continue;
    const std::vector<double> model = joint_column(task.q(), x);
    for (std::size_t n = 0; n < N; ++n) {
      const std::vector<double> mt = position_marginal(shape, truth, n);
      const std::vector<double> mq = position_marginal(shape, model, n);
      const std::size_t c_star = argmax_lowest(mt);
      const std::size_t c_model = argmax_lowest(mq);
      out.per_position_bayes[n] += px - mt[c_star];
      per_position_model[n] += px - mt[c_model];
      out.per_position_delta[n] += mt[c_star] - mt[c_model];
    }
  }
  const auto mean = [N](const std::vector<double>& v) {
    double sum = 0.0;
    for (double e : v) sum += e;
    return sum / static_cast<double>(N);
  };
  out.bayes = mean(out.per_position_bayes);
  out.model = mean(per_position_model);
  out.mean_delta = mean(out.per_position_delta);
  return out;
}

std::array<bool, 4> ChainReport::links(double tolerance) const {
  return {kl_joint >= kl_conditional - tolerance, kl_conditional >= kl_marginal_avg - tolerance,
          kl_marginal_avg >= h_avg - tolerance, h_avg >= h_of_mean - tolerance};
}

bool ChainReport::holds(double tolerance) const {
  const auto l = links(tolerance);
  return std::all_of(l.begin(), l.end(), [](bool b) { return b; });
}

ChainReport kl_chain(const SequenceTask& task, LogBase base) {
  const SequenceShape& shape = task.shape();
  const std::size_t N = shape.length;
  const BoundThreshold t(task.t());
  ChainReport report;
  report.kl_joint = kl_divergence(task.pr(), task.q(), base);

  const std::vector<double> px = observation_marginal(task.pr());
  double conditional = 0.0;
  std::vector<double> per_position_kl(N, 0.0);
  for (std::size_t x = 0; x < shape.observations; ++x) {
    if (px[x] <= 0.0) continue;
    const std::vector<double> p = task.true_conditional(x);
    const std::vector<double> q = task.model_conditional(x);
    conditional += px[x] * kl_divergence(p, q, base);
    for (std::size_t n = 0; n < N; ++n) {
      per_position_kl[n] += px[x] * kl_divergence(position_marginal(shape, p, n),
                                                  position_marginal(shape, q, n), base);
    }
  }
  report.kl_conditional = conditional;
  double marginal_sum = 0.0;
  for (double v : per_position_kl) marginal_sum += v;
  report.kl_marginal_avg = marginal_sum / static_cast<double>(N);

  const SequenceErrors errors = sequence_errors(task);
  report.per_position_delta = errors.per_position_delta;
  report.mean_delta = errors.mean_delta;
  double h_sum = 0.0;
  for (double d : errors.per_position_delta) h_sum += bound_h(d, t, base);
  report.h_avg = h_sum / static_cast<double>(N);
  report.h_of_mean = bound_h(errors.mean_delta, t, base);
  return report;
}

JointDistribution empirical_joint(const SequenceShape& shape,
                                  std::span<const LabeledSequence> samples) {
  if (samples.empty()) throw Error(ErrorKind::EmptySample, "no samples");
  const std::size_t count = shape.sequence_count();
  std::vector<double> counts(count * shape.observations, 0.0);
  for (const auto& sample : samples) {
    if (sample.observation >= shape.observations) {
      throw Error(ErrorKind::BadShape, "observation index out of range");
    }
    counts[sequence_index(shape, sample.sequence) * shape.observations + sample.observation] += 1.0;
  }
  const double M = static_cast<double>(samples.size());
  for (double& v : counts) v /= M;
  return JointDistribution::from_flat(count, shape.observations, std::move(counts));
}

double ce_loss(const SequenceShape& shape, std::span<const LabeledSequence> samples,
               const JointDistribution& q, LogBase base) {
  if (samples.empty()) throw Error(ErrorKind::EmptySample, "no samples");
  if (q.classes() != shape.sequence_count() || q.observations() != shape.observations) {
    throw Error(ErrorKind::ShapeMismatch, "model table does not match the sequence shape");
  }
  double sum = 0.0;
  for (const auto& sample : samples) {
    if (sample.observation >= shape.observations) {
      throw Error(ErrorKind::BadShape, "observation index out of range");
    }
    const double mass = q(sequence_index(shape, sample.sequence), sample.observation);
    if (mass <= 0.0) return std::numeric_limits<double>::infinity();
    sum -= std::log(mass);
  }
  return base.from_nats(sum / static_cast<double>(samples.size()));
}

CeBoundCheck ce_error_bound_check(const SequenceTask& task, LogBase base) {
  const BoundThreshold t(task.t());
  const double slope = linear_slope(t, base);
  const double intercept = linear_intercept(t, base);
  const SequenceErrors errors = sequence_errors(task);
  CeBoundCheck check;
  check.lhs = cross_entropy(task.pr().weights(), task.q().weights(), base);
  check.constant = intercept - slope * errors.bayes + entropy(task.pr().weights(), base);
  check.model_error = errors.model;
  check.rhs = slope * errors.model + check.constant;
  check.holds = check.lhs >= check.rhs - 1e-10;
  return check;
}

std::vector<PplRow> ppl_wer_demo(std::span<const SequenceTask> tasks, LogBase base) {
  std::vector<PplRow> rows;
  if (tasks.empty()) return rows;
  const JointDistribution& truth = tasks.front().pr();
  const PriorDistribution truth_prior = class_prior(truth);
  const double truth_entropy = entropy(truth_prior.mass(), base);
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const SequenceTask& task = tasks[i];
    if (!task.q_prior()) {
      throw Error(ErrorKind::DomainError, "perplexity rows need a sequence-prior model");
    }
    if (!(task.pr() == truth)) {
      throw Error(ErrorKind::DomainError, "tasks must share the true distribution");
    }
    const BoundThreshold t(task.t());
    const double slope = linear_slope(t, base);
    const double intercept = linear_intercept(t, base);
    const SequenceErrors errors = sequence_errors(task);
    PplRow row;
    row.model_id = i;
    row.log_ppl = cross_entropy(truth_prior.mass(), task.q_prior()->mass(), base);
    row.log_ppl_per_token = row.log_ppl / static_cast<double>(task.shape().length);
    row.hamming_error = errors.model;
    row.bound_rhs = slope * errors.model + intercept - slope * errors.bayes + truth_entropy;
    row.holds = row.log_ppl >= row.bound_rhs - 1e-10;
    rows.push_back(row);
  }
  return rows;
}

JointDistribution random_sequence_truth(CounterRng& rng, const SequenceShape& shape, double t) {
  const BoundThreshold threshold(t);
  const std::size_t count = shape.sequence_count();
  const std::size_t X = shape.observations;
  const std::vector<double> px = uniform_simplex(rng, X);

  // Each observation gets a dominant sequence carrying 1 - u of its mass, so
  // every position errs with probability at most u there.
  std::vector<std::size_t> dominant(X);
  std::vector<double> u(X);
  double weighted = 0.0;
  for (std::size_t x = 0; x < X; ++x) {
    dominant[x] = rng.below(count);
    u[x] = rng.uniform();
    weighted += px[x] * u[x];
  }
  if (weighted > threshold.value()) {
    const double scale = threshold.value() * rng.uniform(0.5, 1.0) / weighted;
    for (double& v : u) v *= scale;
  }
  std::vector<double> w(count * X, 0.0);
  for (std::size_t x = 0; x < X; ++x) {
    const std::vector<double> rest = dirichlet(rng, count - 1, log_uniform(rng, 0.1, 1.0));
    for (std::size_t s = 0, r = 0; s < count; ++s) {
      w[s * X + x] = s == dominant[x] ? px[x] * (1.0 - u[x]) : px[x] * u[x] * rest[r++];
    }
  }
  return JointDistribution::from_flat(count, X, std::move(w));
}

SequenceTask random_sequence_task(CounterRng& rng, const SequenceShape& shape, double t,
                                  RandomModel model) {
  JointDistribution pr = random_sequence_truth(rng, shape, t);
  const std::size_t count = pr.classes();
  const std::size_t X = pr.observations();
  const std::vector<double> px = observation_marginal(pr);

  std::vector<double> qx = uniform_simplex(rng, X);
  const double mix_x = rng.uniform_open_low();
  for (std::size_t x = 0; x < X; ++x) qx[x] = (1.0 - mix_x) * px[x] + mix_x * qx[x];

  std::vector<double> w(count * X, 0.0);
  for (std::size_t x = 0; x < X; ++x) {
    std::vector<double> column = dirichlet(rng, count, log_uniform(rng, 0.1, 1.0));
    if (model == RandomModel::Perturbed) {
      const double mix = rng.uniform_open_low();
      for (std::size_t s = 0; s < count; ++s) {
        column[s] = (1.0 - mix) * pr(s, x) / px[x] + mix * column[s];
      }
    }
    for (std::size_t s = 0; s < count; ++s) w[s * X + x] = qx[x] * column[s];
  }
  JointDistribution q = JointDistribution::from_flat(count, X, std::move(w));
  return SequenceTask::from_joint(shape, t, std::move(pr), std::move(q));
}

PriorDistribution random_sequence_prior(CounterRng& rng, const PriorDistribution& near) {
  std::vector<double> draw = dirichlet(rng, near.size(), log_uniform(rng, 0.1, 1.0));
  if (rng.uniform() < 0.5) {
    const double mix = rng.uniform_open_low();
    for (std::size_t c = 0; c < draw.size(); ++c) draw[c] = (1.0 - mix) * near[c] + mix * draw[c];
  }
  return PriorDistribution::from_masses(std::move(draw));
}

}  // namespace errbound
