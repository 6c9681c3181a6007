#include "errbound/distributions.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "errbound/error.hpp"

namespace errbound {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Checks sign and total mass of `mass`, renormalizing float dust in place.
void check_and_normalize(std::vector<double>& mass, const char* what) {
  for (double v : mass) {
    if (std::isnan(v) || std::isinf(v)) {
      throw Error(ErrorKind::BadShape, std::string(what) + " has a non-finite entry");
    }
    if (v < 0.0) {
      throw Error(ErrorKind::NegativeMass, std::string(what) + " has entry " + std::to_string(v));
    }
  }
  const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
  const double deviation = std::abs(total - 1.0);
  if (deviation > kRenormalizeLimit) {
    throw Error(ErrorKind::NotNormalized,
                std::string(what) + " sums to " + std::to_string(total));
  }
  if (deviation > kNormTolerance) {
    for (double& v : mass) v /= total;
  }
}

void check_same_size(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorKind::ShapeMismatch,
                "lengths " + std::to_string(a) + " and " + std::to_string(b) + " differ");
  }
}

}  // namespace

JointDistribution JointDistribution::validate(const std::vector<std::vector<double>>& table) {
  if (table.size() < 2) {
    throw Error(ErrorKind::BadShape, "need at least two classes");
  }
  const std::size_t observations = table.front().size();
  std::vector<double> flat;
  flat.reserve(table.size() * observations);
  for (const auto& row : table) {
    if (row.size() != observations) {
      throw Error(ErrorKind::BadShape, "table is not rectangular");
    }
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return from_flat(table.size(), observations, std::move(flat));
}

JointDistribution JointDistribution::from_flat(std::size_t classes, std::size_t observations,
                                               std::vector<double> weights) {
  if (classes < 2) throw Error(ErrorKind::BadShape, "need at least two classes");
  if (observations < 1) throw Error(ErrorKind::BadShape, "need at least one observation");
  if (weights.size() != classes * observations) {
    throw Error(ErrorKind::BadShape, "weight count does not match classes x observations");
  }
  check_and_normalize(weights, "joint table");
  return JointDistribution(classes, observations, std::move(weights));
}

std::vector<std::vector<double>> JointDistribution::to_table() const {
  std::vector<std::vector<double>> table(classes_, std::vector<double>(observations_));
  for (std::size_t c = 0; c < classes_; ++c) {
    for (std::size_t x = 0; x < observations_; ++x) table[c][x] = (*this)(c, x);
  }
  return table;
}

PosteriorModel PosteriorModel::from_columns(const std::vector<std::vector<double>>& columns) {
  if (columns.empty()) throw Error(ErrorKind::BadShape, "need at least one observation");
  const std::size_t classes = columns.front().size();
  if (classes < 2) throw Error(ErrorKind::BadShape, "need at least two classes");
  std::vector<std::vector<double>> checked = columns;
  for (auto& column : checked) {
    if (column.size() != classes) throw Error(ErrorKind::BadShape, "ragged posterior columns");
    check_and_normalize(column, "posterior column");
  }
  return PosteriorModel(classes, std::move(checked));
}

PriorDistribution PriorDistribution::from_masses(std::vector<double> mass) {
  if (mass.empty()) throw Error(ErrorKind::BadShape, "empty prior");
  check_and_normalize(mass, "prior");
  return PriorDistribution(std::move(mass));
}

std::vector<double> observation_marginal(const JointDistribution& d) {
  std::vector<double> px(d.observations(), 0.0);
  for (std::size_t c = 0; c < d.classes(); ++c) {
    for (std::size_t x = 0; x < d.observations(); ++x) px[x] += d(c, x);
  }
  return px;
}

std::vector<double> posterior(const JointDistribution& d, std::size_t x) {
  if (x >= d.observations()) throw Error(ErrorKind::BadShape, "observation index out of range");
  std::vector<double> column(d.classes());
  double px = 0.0;
  for (std::size_t c = 0; c < d.classes(); ++c) {
    column[c] = d(c, x);
    px += column[c];
  }
  if (px <= 0.0) {
    throw Error(ErrorKind::ZeroMassObservation, "observation " + std::to_string(x));
  }
  for (double& v : column) v /= px;
  return column;
}

PriorDistribution class_prior(const JointDistribution& d) {
  std::vector<double> prior(d.classes(), 0.0);
  for (std::size_t c = 0; c < d.classes(); ++c) {
    for (std::size_t x = 0; x < d.observations(); ++x) prior[c] += d(c, x);
  }
  return PriorDistribution::from_masses(std::move(prior));
}

JointDistribution joint_from_posterior(const PosteriorModel& m, std::span<const double> px) {
  if (px.size() != m.observations()) {
    throw Error(ErrorKind::ShapeMismatch, "observation marginal does not match the model");
  }
  std::vector<double> flat(m.classes() * m.observations());
  for (std::size_t c = 0; c < m.classes(); ++c) {
    for (std::size_t x = 0; x < m.observations(); ++x) {
      flat[c * m.observations() + x] = m(c, x) * px[x];
    }
  }
  return JointDistribution::from_flat(m.classes(), m.observations(), std::move(flat));
}

PosteriorModel posterior_model(const JointDistribution& d) {
  std::vector<std::vector<double>> columns(d.observations());
  for (std::size_t x = 0; x < d.observations(); ++x) {
    double px = 0.0;
    for (std::size_t c = 0; c < d.classes(); ++c) px += d(c, x);
    columns[x].resize(d.classes());
    for (std::size_t c = 0; c < d.classes(); ++c) {
      columns[x][c] = px > 0.0 ? d(c, x) / px : 1.0 / static_cast<double>(d.classes());
    }
  }
  return PosteriorModel::from_columns(columns);
}

JointDistribution joint_with_prior(const PriorDistribution& model_prior,
                                   const JointDistribution& truth) {
  if (model_prior.size() != truth.classes()) {
    throw Error(ErrorKind::ShapeMismatch, "prior size does not match the class count");
  }
  const PriorDistribution pc = class_prior(truth);
  std::vector<double> flat(truth.classes() * truth.observations(), 0.0);
  for (std::size_t c = 0; c < truth.classes(); ++c) {
    if (pc[c] <= 0.0) continue;
    for (std::size_t x = 0; x < truth.observations(); ++x) {
      flat[c * truth.observations() + x] = model_prior[c] * (truth(c, x) / pc[c]);
    }
  }
  // Prior mass on classes absent from the truth is dropped.
  const double total = std::accumulate(flat.begin(), flat.end(), 0.0);
  if (total <= 0.0) {
    throw Error(ErrorKind::DomainError, "model prior has no mass on the support of the truth");
  }
  for (double& v : flat) v /= total;
  return JointDistribution::from_flat(truth.classes(), truth.observations(), std::move(flat));
}

double kl_divergence(std::span<const double> p, std::span<const double> q, LogBase base) {
  check_same_size(p.size(), q.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return kInf;
    sum += p[i] * std::log(p[i] / q[i]);
  }
  return base.from_nats(sum);
}

double kl_divergence(const JointDistribution& p, const JointDistribution& q, LogBase base) {
  if (p.classes() != q.classes() || p.observations() != q.observations()) {
    throw Error(ErrorKind::ShapeMismatch, "joint tables differ in shape");
  }
  return kl_divergence(p.weights(), q.weights(), base);
}

double kl_divergence(const PriorDistribution& p, const PriorDistribution& q, LogBase base) {
  return kl_divergence(p.mass(), q.mass(), base);
}

double entropy(std::span<const double> p, LogBase base) {
  double sum = 0.0;
  for (double v : p) {
    if (v > 0.0) sum -= v * std::log(v);
  }
  return base.from_nats(sum);
}

double cross_entropy(std::span<const double> p, std::span<const double> q, LogBase base) {
  check_same_size(p.size(), q.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return kInf;
    sum -= p[i] * std::log(q[i]);
  }
  return base.from_nats(sum);
}

}  // namespace errbound
