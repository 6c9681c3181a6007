#include "errbound/frontier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "errbound/bounds.hpp"
#include "errbound/decisions.hpp"
#include "errbound/error.hpp"
#include "errbound/text_io.hpp"

namespace errbound {
namespace {

void check_parameters(double t, double lambda) {
  if (!(t > 0.0 && t < 0.5)) {
    throw Error(ErrorKind::DomainError, "family needs 0 < t < 0.5");
  }
  if (!(lambda >= 0.5 && lambda <= 1.0 - t + 1e-15)) {
    throw Error(ErrorKind::DomainError,
                "lambda=" + std::to_string(lambda) + " outside [0.5, 1 - t]");
  }
}

}  // namespace

PriorFamilyPoint build_family_point(double t, double lambda, double epsilon) {
  check_parameters(t, lambda);
  if (!(epsilon > 0.0 && epsilon <= 0.5)) {
    throw Error(ErrorKind::DomainError, "epsilon must lie in (0, 0.5]");
  }
  const double k = t / (1.0 - lambda);
  const double head = std::max(0.0, 1.0 - k);
  // rows c1, c2, c3; columns x1, x2
  std::vector<double> weights = {
      head, 0.0,
      0.0,  k * lambda,
      0.0,  t,
  };
  PriorFamilyPoint point{
      t,
      lambda,
      epsilon,
      JointDistribution::from_flat(3, 2, std::move(weights)),
      PriorDistribution::from_masses({head, k * (0.5 - epsilon), k * (0.5 + epsilon)}),
  };
  return point;
}

double family_mismatch_closed_form(double t, double lambda) {
  check_parameters(t, lambda);
  return t * (2.0 * lambda - 1.0) / (1.0 - lambda);
}

double family_kl_closed_form(double t, double lambda, LogBase base) {
  check_parameters(t, lambda);
  const double nats =
      (t * lambda / (1.0 - lambda)) * std::log(2.0 * lambda) + t * std::log(2.0 * (1.0 - lambda));
  return base.from_nats(nats);
}

std::vector<double> lambda_grid(double t, std::size_t steps) {
  if (!(t > 0.0 && t < 0.5)) throw Error(ErrorKind::DomainError, "family needs 0 < t < 0.5");
  if (steps < 1) throw Error(ErrorKind::DomainError, "lambda grid needs at least one point");
  if (steps == 1) return {0.5};
  std::vector<double> grid(steps);
  const double hi = 1.0 - t;
  for (std::size_t i = 0; i < steps; ++i) {
    grid[i] = 0.5 + (hi - 0.5) * static_cast<double>(i) / static_cast<double>(steps - 1);
  }
  grid.back() = hi;
  return grid;
}

std::vector<FrontierRow> sweep_frontier(double t, std::span<const double> lambdas,
                                        double epsilon, LogBase base) {
  const BoundThreshold threshold(t);
  std::vector<FrontierRow> rows;
  rows.reserve(lambdas.size());
  for (double lambda : lambdas) {
    const PriorFamilyPoint point = build_family_point(t, lambda, epsilon);
    FrontierRow row;
    row.lambda = lambda;
    row.t = t;
    row.epsilon = epsilon;
    row.delta = mismatch(point.pr, point.model_joint()).mismatch;
    row.kl_finite = kl_divergence(class_prior(point.pr), point.q_prior, base);
    row.kl_closed = family_kl_closed_form(t, lambda, base);
    row.h = bound_h(row.delta, threshold, base);
    row.gap = row.kl_finite - row.h;
    rows.push_back(row);
  }
  return rows;
}

std::string frontier_csv(std::span<const FrontierRow> rows) {
  std::ostringstream out;
  out << "lambda,t,epsilon,delta,kl_finite,kl_closed,h,gap\n";
  for (const auto& r : rows) {
    out << format_sig17(r.lambda) << ',' << format_sig17(r.t) << ',' << format_sig17(r.epsilon)
        << ',' << format_sig17(r.delta) << ',' << format_sig17(r.kl_finite) << ','
        << format_sig17(r.kl_closed) << ',' << format_sig17(r.h) << ',' << format_sig17(r.gap)
        << '\n';
  }
  return out.str();
}

}  // namespace errbound
