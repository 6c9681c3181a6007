#include "errbound/decisions.hpp"

#include <sstream>
#include <string>

#include "errbound/error.hpp"
#include "errbound/text_io.hpp"

namespace errbound {
namespace {

void require_same_shape(const JointDistribution& pr, std::size_t classes,
                        std::size_t observations) {
  if (pr.classes() != classes || pr.observations() != observations) {
    throw Error(ErrorKind::ShapeMismatch, "true and model tables differ in shape");
  }
}

std::vector<double> column_of(const JointDistribution& d, std::size_t x) {
  std::vector<double> column(d.classes());
  for (std::size_t c = 0; c < d.classes(); ++c) column[c] = d(c, x);
  return column;
}

std::size_t decide_from_column(std::span<const double> column, std::size_t x) {
  double mass = 0.0;
  for (double v : column) mass += v;
  if (mass <= 0.0) {
    throw Error(ErrorKind::ZeroMassObservation, "observation " + std::to_string(x));
  }
  return argmax_lowest(column);
}

// Shared core of the joint and posterior overloads; `model_column(x)` yields
// anything proportional to q(c|x).
template <typename ModelColumn>
DecisionReport build_report(const JointDistribution& pr, ModelColumn&& model_column) {
  DecisionReport report;
  double bayes = 0.0;
  double model = 0.0;
  double delta = 0.0;
  for (std::size_t x = 0; x < pr.observations(); ++x) {
    const std::vector<double> truth = column_of(pr, x);
    double px = 0.0;
    for (double v : truth) px += v;
    if (px <= 0.0) continue;

    const std::size_t c_star = argmax_lowest(truth);
    const std::size_t c_model = argmax_lowest(model_column(x));
    ObservationDecision d;
    d.x = x;
    d.bayes_class = c_star;
    d.model_class = c_model;
    d.px = px;
    d.post_bayes = truth[c_star] / px;
    d.post_model = truth[c_model] / px;
    d.contribution = truth[c_star] - truth[c_model];

    bayes += px - truth[c_star];
    model += px - truth[c_model];
    delta += d.contribution;
    report.per_observation.push_back(d);
  }
  report.bayes_error = bayes;
  report.model_error = model;
  report.mismatch = delta;
  return report;
}

}  // namespace

std::size_t argmax_lowest(std::span<const double> values) noexcept {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

std::size_t bayes_decision(const JointDistribution& pr, std::size_t x) {
  if (x >= pr.observations()) throw Error(ErrorKind::BadShape, "observation index out of range");
  return decide_from_column(column_of(pr, x), x);
}

std::size_t model_decision(const JointDistribution& q, std::size_t x) {
  return bayes_decision(q, x);
}

std::size_t model_decision(const PosteriorModel& q, std::size_t x) {
  if (x >= q.observations()) throw Error(ErrorKind::BadShape, "observation index out of range");
  return decide_from_column(q.column(x), x);
}

double bayes_error(const JointDistribution& pr) {
  double error = 0.0;
  for (std::size_t x = 0; x < pr.observations(); ++x) {
    double px = 0.0;
    double best = 0.0;
    for (std::size_t c = 0; c < pr.classes(); ++c) {
      px += pr(c, x);
      if (pr(c, x) > best) best = pr(c, x);
    }
    error += px - best;
  }
  return error;
}

double model_error(const JointDistribution& pr, const JointDistribution& q) {
  return mismatch(pr, q).model_error;
}

double model_error(const JointDistribution& pr, const PosteriorModel& q) {
  return mismatch(pr, q).model_error;
}

DecisionReport mismatch(const JointDistribution& pr, const JointDistribution& q) {
  require_same_shape(pr, q.classes(), q.observations());
  return build_report(pr, [&](std::size_t x) { return column_of(q, x); });
}

DecisionReport mismatch(const JointDistribution& pr, const PosteriorModel& q) {
  require_same_shape(pr, q.classes(), q.observations());
  return build_report(pr, [&](std::size_t x) { return q.column(x); });
}

std::string decision_report_csv(const DecisionReport& report) {
  std::ostringstream out;
  out << "x,bayes_class,model_class,px,post_bayes,post_model\n";
  for (const auto& d : report.per_observation) {
    out << d.x << ',' << d.bayes_class << ',' << d.model_class << ',' << format_shortest(d.px)
        << ',' << format_shortest(d.post_bayes) << ',' << format_shortest(d.post_model) << '\n';
  }
  return out.str();
}

}  // namespace errbound
