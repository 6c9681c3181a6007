#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "errbound/distributions.hpp"
#include "errbound/log_base.hpp"

namespace errbound {

class CounterRng;

/// Hard cap on the number of enumerated class sequences C^N.
inline constexpr std::size_t kMaxSequences = 4096;

using ClassSequence = std::vector<std::size_t>;

/// Fixed-length class sequences over an alphabet of `classes` symbols, paired
/// with `observations` atomic whole-sequence observations.
struct SequenceShape {
  std::size_t length = 1;
  std::size_t classes = 2;
  std::size_t observations = 1;

  /// C^N. Throws DomainError when it exceeds kMaxSequences or the shape is empty.
  std::size_t sequence_count() const;
  void validate() const { (void)sequence_count(); }
};

/// Lexicographic rank of a sequence (position 0 most significant).
std::size_t sequence_index(const SequenceShape& shape, std::span<const std::size_t> sequence);
ClassSequence sequence_at(const SequenceShape& shape, std::size_t index);

/// True and model distributions over (class sequence, observation).
///
/// Both sides are stored as joint tables with one row per class sequence in
/// lexicographic order and one column per observation. Construction enforces
/// the per-position Bayes error cap E*_n <= t for every position n.
class SequenceTask {
 public:
  /// Model given as a joint q(c_1^N, X); its own marginal defines q(c_1^N | X).
  static SequenceTask from_joint(SequenceShape shape, double t, JointDistribution pr,
                                 JointDistribution q);
  /// Model given as q(c_1^N | X); joined with pr(X).
  static SequenceTask from_conditional(SequenceShape shape, double t, JointDistribution pr,
                                       const PosteriorModel& q);
  /// Sequence prior q'(c_1^N) with the perfect observation model pr(X | c_1^N).
  static SequenceTask from_prior(SequenceShape shape, double t, JointDistribution pr,
                                 PriorDistribution q_prior);

  const SequenceShape& shape() const noexcept { return shape_; }
  double t() const noexcept { return t_; }
  const JointDistribution& pr() const noexcept { return pr_; }
  /// Model joint.
  const JointDistribution& q() const noexcept { return q_; }
  /// Present for tasks built from a sequence prior.
  const std::optional<PriorDistribution>& q_prior() const noexcept { return q_prior_; }

  /// pr(c_1^N | X) as a vector over sequences. Throws ZeroMassObservation.
  std::vector<double> true_conditional(std::size_t x) const;
  /// q(c_1^N | X); all zeros when the model has no mass at X.
  std::vector<double> model_conditional(std::size_t x) const;

 private:
  SequenceTask(SequenceShape shape, double t, JointDistribution pr, JointDistribution q,
               std::optional<PriorDistribution> prior);

  SequenceShape shape_;
  double t_;
  JointDistribution pr_;
  JointDistribution q_;
  std::optional<PriorDistribution> q_prior_;
};

/// Fraction of positions where the sequences differ. Throws LengthMismatch.
double hamming_loss(std::span<const std::size_t> a, std::span<const std::size_t> b);

/// Marginal at `position` (0-based) of a distribution over sequences.
std::vector<double> position_marginal(const SequenceShape& shape,
                                      std::span<const double> over_sequences,
                                      std::size_t position);
/// pr_n(c | X). Throws ZeroMassObservation when pr(X) = 0.
std::vector<double> position_marginal(const SequenceTask& task, std::size_t x,
                                      std::size_t position);

/// 1 - (1/N) sum_n p_n(c_n) for a distribution p over whole sequences.
double expected_sequence_error(const SequenceShape& shape, std::span<const double> conditional,
                               std::span<const std::size_t> sequence);
/// sum over all sequences s of p(s) * hamming_loss(sequence, s).
double expected_sequence_error_direct(const SequenceShape& shape,
                                      std::span<const double> conditional,
                                      std::span<const std::size_t> sequence);

/// 1 - (1/N) sum_n pr_n(c_n | X).
double expected_sequence_error(const SequenceTask& task, std::size_t x,
                               std::span<const std::size_t> sequence);
/// sum over all sequences s of pr(s | X) * hamming_loss(sequence, s).
double expected_sequence_error_direct(const SequenceTask& task, std::size_t x,
                                      std::span<const std::size_t> sequence);

struct SequenceErrors {
  double bayes = 0.0;  // mean over positions of the per-position Bayes error
  double model = 0.0;
  std::vector<double> per_position_bayes;
  std::vector<double> per_position_delta;
  double mean_delta = 0.0;
};

/// Position-wise Bayes and model decisions with lowest-index tie-break.
SequenceErrors sequence_errors(const SequenceTask& task);

/// The five quantities of the KL chain, each computed by explicit summation:
///   kl_joint >= kl_conditional >= kl_marginal_avg >= h_avg >= h_of_mean
struct ChainReport {
  double kl_joint = 0.0;
  double kl_conditional = 0.0;
  double kl_marginal_avg = 0.0;
  double h_avg = 0.0;
  double h_of_mean = 0.0;
  std::vector<double> per_position_delta;
  double mean_delta = 0.0;

  /// Each link of the chain within `tolerance`.
  std::array<bool, 4> links(double tolerance = 1e-10) const;
  bool holds(double tolerance = 1e-10) const;
};

ChainReport kl_chain(const SequenceTask& task, LogBase base = LogBase::natural());

struct LabeledSequence {
  ClassSequence sequence;
  std::size_t observation = 0;
};

/// pr(c_1^N, X) = count / M. Throws EmptySample on no samples.
JointDistribution empirical_joint(const SequenceShape& shape,
                                  std::span<const LabeledSequence> samples);

/// -(1/M) sum_m log q(c_m, X_m); +infinity when a sample has no model mass.
double ce_loss(const SequenceShape& shape, std::span<const LabeledSequence> samples,
               const JointDistribution& q, LogBase base = LogBase::natural());

struct CeBoundCheck {
  double lhs = 0.0;       // H(pr, q)
  double rhs = 0.0;       // slope * model_error + constant
  double constant = 0.0;  // intercept - slope * bayes_error + H(pr)
  double model_error = 0.0;
  bool holds = false;
};

/// H(pr, q) >= log(2 - 2t) E_q + const. Requires t > 0.
CeBoundCheck ce_error_bound_check(const SequenceTask& task, LogBase base = LogBase::natural());

struct PplRow {
  std::size_t model_id = 0;
  double log_ppl = 0.0;            // H(pr(c_1^N), q'(c_1^N))
  double log_ppl_per_token = 0.0;  // log_ppl / N
  double hamming_error = 0.0;      // model error under the Hamming loss
  double bound_rhs = 0.0;
  bool holds = false;
};

/// Rows for tasks that share one true distribution and differ only in their
/// sequence prior. Throws DomainError when a task has no prior, the tasks do
/// not share pr, or t = 0.
std::vector<PplRow> ppl_wer_demo(std::span<const SequenceTask> tasks,
                                 LogBase base = LogBase::natural());

enum class RandomModel {
  /// Independent conditional draw per observation.
  Independent,
  /// Mixture of the true conditional with a random draw, random weight.
  Perturbed,
};

/// Random true distribution satisfying the per-position cap, paired with a
/// random conditional model. Every value is drawn from `rng`.
SequenceTask random_sequence_task(CounterRng& rng, const SequenceShape& shape, double t,
                                  RandomModel model);

/// Random true distribution only.
JointDistribution random_sequence_truth(CounterRng& rng, const SequenceShape& shape, double t);

/// Random sequence prior; with probability 1/2 it is a perturbation of `near`.
PriorDistribution random_sequence_prior(CounterRng& rng, const PriorDistribution& near);

}  // namespace errbound
