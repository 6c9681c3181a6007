#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "errbound/log_base.hpp"

namespace errbound {

/// Maximum deviation from unit mass tolerated in a stored distribution.
inline constexpr double kNormTolerance = 1e-12;
/// Inputs whose mass deviates by more than this are rejected instead of renormalized.
inline constexpr double kRenormalizeLimit = 1e-9;

/// Dense probability table pr(c, x) over classes x observations, row-major by class.
///
/// Immutable once built. The only way to obtain one is through validation,
/// so every instance has non-negative entries summing to 1 within
/// kNormTolerance, at least two classes and at least one observation.
class JointDistribution {
 public:
  /// Validates a rectangular table indexed [class][observation].
  static JointDistribution validate(const std::vector<std::vector<double>>& table);
  /// Validates a row-major flat table of classes x observations entries.
  static JointDistribution from_flat(std::size_t classes, std::size_t observations,
                                     std::vector<double> weights);

  std::size_t classes() const noexcept { return classes_; }
  std::size_t observations() const noexcept { return observations_; }
  double operator()(std::size_t c, std::size_t x) const noexcept {
    return weights_[c * observations_ + x];
  }
  std::span<const double> weights() const noexcept { return weights_; }
  std::vector<std::vector<double>> to_table() const;

  friend bool operator==(const JointDistribution&, const JointDistribution&) = default;

 private:
  JointDistribution(std::size_t classes, std::size_t observations, std::vector<double> weights)
      : classes_(classes), observations_(observations), weights_(std::move(weights)) {}

  std::size_t classes_ = 0;
  std::size_t observations_ = 0;
  std::vector<double> weights_;
};

/// Per-observation class posteriors q(c|x), one normalized column per observation.
class PosteriorModel {
 public:
  /// `columns[x][c]` is q(c|x).
  static PosteriorModel from_columns(const std::vector<std::vector<double>>& columns);

  std::size_t classes() const noexcept { return classes_; }
  std::size_t observations() const noexcept { return columns_.size(); }
  double operator()(std::size_t c, std::size_t x) const noexcept { return columns_[x][c]; }
  std::span<const double> column(std::size_t x) const noexcept { return columns_[x]; }

 private:
  explicit PosteriorModel(std::size_t classes, std::vector<std::vector<double>> columns)
      : classes_(classes), columns_(std::move(columns)) {}

  std::size_t classes_ = 0;
  std::vector<std::vector<double>> columns_;
};

/// Probability vector over classes, e.g. pr(c) or a model prior q'(c).
class PriorDistribution {
 public:
  static PriorDistribution from_masses(std::vector<double> mass);

  std::size_t size() const noexcept { return mass_.size(); }
  double operator[](std::size_t c) const noexcept { return mass_[c]; }
  std::span<const double> mass() const noexcept { return mass_; }

  friend bool operator==(const PriorDistribution&, const PriorDistribution&) = default;

 private:
  explicit PriorDistribution(std::vector<double> mass) : mass_(std::move(mass)) {}

  std::vector<double> mass_;
};

/// pr(x) = sum_c pr(c, x).
std::vector<double> observation_marginal(const JointDistribution& d);

/// pr(c|x). Throws ZeroMassObservation when pr(x) = 0.
std::vector<double> posterior(const JointDistribution& d, std::size_t x);

/// pr(c) = sum_x pr(c, x).
PriorDistribution class_prior(const JointDistribution& d);

/// q(c, x) = q(c|x) * px(x).
JointDistribution joint_from_posterior(const PosteriorModel& m, std::span<const double> px);

/// Conditional columns q(c|x) of a joint table; observations without mass get
/// a uniform column so the result is always a valid model.
PosteriorModel posterior_model(const JointDistribution& d);

/// Model joint with a perfect observation model: q'(c, x) = q'(c) * pr(x|c).
/// Classes with pr(c) = 0 contribute an all-zero row.
JointDistribution joint_with_prior(const PriorDistribution& model_prior,
                                   const JointDistribution& truth);

/// sum_i p_i log(p_i / q_i) with 0 log(0/q) = 0. Returns +infinity when some
/// p_i > 0 meets q_i = 0. Throws ShapeMismatch on differing lengths.
double kl_divergence(std::span<const double> p, std::span<const double> q,
                     LogBase base = LogBase::natural());
double kl_divergence(const JointDistribution& p, const JointDistribution& q,
                     LogBase base = LogBase::natural());
double kl_divergence(const PriorDistribution& p, const PriorDistribution& q,
                     LogBase base = LogBase::natural());

/// -sum_i p_i log p_i.
double entropy(std::span<const double> p, LogBase base = LogBase::natural());

/// -sum_i p_i log q_i; +infinity on a support failure.
double cross_entropy(std::span<const double> p, std::span<const double> q,
                     LogBase base = LogBase::natural());

}  // namespace errbound
