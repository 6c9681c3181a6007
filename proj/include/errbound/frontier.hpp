#pragma once

#include <span>
#include <string>
#include <vector>

#include "errbound/distributions.hpp"

namespace errbound {

/// One member of the three-class, two-observation family that attains the
/// refined bound with equality for a class-prior model and a perfect
/// observation model.
///
/// Classes 0, 1, 2 and observations 0, 1 play the roles of c1, c2, c3 and
/// x1, x2. With k = t / (1 - lambda):
///   pr(c1, x1) = 1 - k,  pr(c2, x2) = k lambda,  pr(c3, x2) = t
///   q'(c)      = (1 - k, k (1/2 - eps), k (1/2 + eps))
/// Observation x2 is decided c2 by the Bayes rule but c3 by the model, which
/// is what produces the mismatch.
struct PriorFamilyPoint {
  double t = 0.0;
  double lambda = 0.0;
  double epsilon = 0.0;
  JointDistribution pr;
  PriorDistribution q_prior;

  /// q'(c, x) = q'(c) pr(x|c).
  JointDistribution model_joint() const { return joint_with_prior(q_prior, pr); }
};

/// Throws DomainError unless 0 < t < 0.5, 0.5 <= lambda <= 1 - t and
/// 0 < epsilon <= 0.5.
PriorFamilyPoint build_family_point(double t, double lambda, double epsilon);

/// t (2 lambda - 1) / (1 - lambda).
double family_mismatch_closed_form(double t, double lambda);

/// Limit of the prior KL as epsilon -> 0:
///   (t lambda / (1 - lambda)) log(2 lambda) + t log(2 (1 - lambda)).
double family_kl_closed_form(double t, double lambda, LogBase base = LogBase::natural());

/// `steps` evenly spaced lambda values covering [0.5, 1 - t] inclusive.
std::vector<double> lambda_grid(double t, std::size_t steps);

struct FrontierRow {
  double lambda = 0.0;
  double t = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;      // measured through the decision rules
  double kl_finite = 0.0;  // prior KL at the given epsilon
  double kl_closed = 0.0;  // epsilon -> 0 closed form
  double h = 0.0;          // refined bound at delta
  double gap = 0.0;        // kl_finite - h
};

std::vector<FrontierRow> sweep_frontier(double t, std::span<const double> lambdas,
                                        double epsilon, LogBase base = LogBase::natural());

/// Header "lambda,t,epsilon,delta,kl_finite,kl_closed,h,gap".
std::string frontier_csv(std::span<const FrontierRow> rows);

}  // namespace errbound
