#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "errbound/distributions.hpp"

namespace errbound {

/// Index of the largest entry; ties go to the lowest index. Zero-length input
/// is not allowed.
std::size_t argmax_lowest(std::span<const double> values) noexcept;

struct ObservationDecision {
  std::size_t x = 0;
  std::size_t bayes_class = 0;
  std::size_t model_class = 0;
  double px = 0.0;
  double post_bayes = 0.0;   // pr(c*(x) | x)
  double post_model = 0.0;   // pr(c_q(x) | x)
  double contribution = 0.0; // px * (post_bayes - post_model)
};

/// Global Bayes error E*, model error E_q and their mismatch.
struct DecisionReport {
  double bayes_error = 0.0;
  double model_error = 0.0;
  double mismatch = 0.0;
  /// Observations with pr(x) = 0 are omitted.
  std::vector<ObservationDecision> per_observation;
};

/// argmax_c pr(c|x). Throws ZeroMassObservation when pr(x) = 0.
std::size_t bayes_decision(const JointDistribution& pr, std::size_t x);

/// argmax_c q(c|x). Throws ZeroMassObservation when q(x) = 0.
std::size_t model_decision(const JointDistribution& q, std::size_t x);
std::size_t model_decision(const PosteriorModel& q, std::size_t x);

/// E* = sum_x pr(x) (1 - max_c pr(c|x)).
double bayes_error(const JointDistribution& pr);

/// E_q = sum_x pr(x) (1 - pr(c_q(x)|x)). Observations where the model column
/// has no mass fall back to class 0, the lowest-index tie-break over zeros.
double model_error(const JointDistribution& pr, const JointDistribution& q);
double model_error(const JointDistribution& pr, const PosteriorModel& q);

DecisionReport mismatch(const JointDistribution& pr, const JointDistribution& q);
DecisionReport mismatch(const JointDistribution& pr, const PosteriorModel& q);

/// CSV with header "x,bayes_class,model_class,px,post_bayes,post_model".
std::string decision_report_csv(const DecisionReport& report);

}  // namespace errbound
