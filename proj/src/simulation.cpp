#include "errbound/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "errbound/bounds.hpp"
#include "errbound/decisions.hpp"
#include "errbound/error.hpp"
#include "errbound/frontier.hpp"
#include "errbound/parallel.hpp"
#include "errbound/rng.hpp"
#include "errbound/text_io.hpp"

namespace errbound {
namespace {

// Independent RNG streams per purpose, so changing one sampler never shifts
// the draws of another.
enum Stream : std::uint64_t {
  kStrategyStream = 0,
  kRejectionStream = 1,
  kConstructiveStream = 2,
  kFrontierStream = 3,
  kModelStream = 4,
};

constexpr std::size_t kFrontierJitterAttempts = 64;

double log_uniform(CounterRng& rng, double lo, double hi) {
  return std::exp(rng.uniform(std::log(lo), std::log(hi)));
}

// Same quantity as bayes_error(), on a raw row-major table.
double raw_bayes_error(std::span<const double> w, std::size_t classes, std::size_t observations) {
  double error = 0.0;
  for (std::size_t x = 0; x < observations; ++x) {
    double px = 0.0;
    double best = 0.0;
    for (std::size_t c = 0; c < classes; ++c) {
      const double v = w[c * observations + x];
      px += v;
      best = std::max(best, v);
    }
    error += px - best;
  }
  return error;
}

JointDistribution sample_rejection(const SamplerConfig& cfg, std::uint64_t index) {
  CounterRng rng(cfg.seed, index, kRejectionStream);
  const std::size_t cells = cfg.num_classes * cfg.num_observations;
  for (std::uint64_t attempt = 0; attempt < kMaxRejectionAttempts; ++attempt) {
    // Symmetric simplex draw; the concentration itself is random so that
    // sparse tables with small Bayes error are reachable at small t.
    const double alpha = log_uniform(rng, 1e-3, 1.0);
    std::vector<double> w = dirichlet(rng, cells, alpha);
    if (raw_bayes_error(w, cfg.num_classes, cfg.num_observations) <= cfg.t) {
      return JointDistribution::from_flat(cfg.num_classes, cfg.num_observations, std::move(w));
    }
  }
  throw Error(ErrorKind::SamplerExhausted,
              "no draw with Bayes error <= t after " + std::to_string(kMaxRejectionAttempts) +
                  " attempts (index " + std::to_string(index) + ")");
}

JointDistribution sample_constructive(const SamplerConfig& cfg, std::uint64_t index) {
  CounterRng rng(cfg.seed, index, kConstructiveStream);
  const std::size_t C = cfg.num_classes;
  const std::size_t X = cfg.num_observations;
  const std::vector<double> px = uniform_simplex(rng, X);
  std::vector<double> w(C * X, 0.0);
  for (std::size_t x = 0; x < X; ++x) {
    const std::size_t dominant = rng.below(C);
    const double u = rng.uniform(0.0, cfg.t);
    const std::vector<double> rest = uniform_simplex(rng, C - 1);
    w[dominant * X + x] = px[x] * (1.0 - u);
    for (std::size_t c = 0, r = 0; c < C; ++c) {
      if (c == dominant) continue;
      w[c * X + x] = px[x] * u * rest[r++];
    }
  }
  return JointDistribution::from_flat(C, X, std::move(w));
}

// Multiplies every entry by 1 + noise * U(-1, 1) and renormalizes. Zeros stay zero.
std::vector<double> jitter(CounterRng& rng, std::span<const double> values, double noise) {
  std::vector<double> out(values.begin(), values.end());
  double total = 0.0;
  for (double& v : out) {
    v *= 1.0 + noise * rng.uniform(-1.0, 1.0);
    total += v;
  }
  for (double& v : out) v /= total;
  return out;
}

struct FrontierDraw {
  JointDistribution pr;
  SampledModel model;
};

// A frontier-family point embedded at random class and observation slots, with
// relative jitter on its support.
FrontierDraw sample_frontier(const SamplerConfig& cfg, std::uint64_t index) {
  CounterRng rng(cfg.seed, index, kFrontierStream);
  const std::size_t C = cfg.num_classes;
  const std::size_t X = cfg.num_observations;
  const double lambda = rng.uniform(0.5, 1.0 - cfg.t);
  const double epsilon = log_uniform(rng, 1e-6, 1e-2);
  const PriorFamilyPoint point = build_family_point(cfg.t, lambda, epsilon);
  const std::vector<std::size_t> class_slot = permutation(rng, C);
  const std::vector<std::size_t> obs_slot = permutation(rng, X);

  std::vector<double> base_pr(C * X, 0.0);
  std::vector<double> base_prior(C, 0.0);
  for (std::size_t c = 0; c < 3; ++c) {
    base_prior[class_slot[c]] = point.q_prior[c];
    for (std::size_t x = 0; x < 2; ++x) {
      base_pr[class_slot[c] * X + obs_slot[x]] = point.pr(c, x);
    }
  }

  std::vector<double> pr_weights = base_pr;
  for (std::size_t attempt = 0; attempt < kFrontierJitterAttempts; ++attempt) {
    std::vector<double> candidate = jitter(rng, base_pr, kFrontierNoise);
    if (raw_bayes_error(candidate, C, X) <= cfg.t) {
      pr_weights = std::move(candidate);
      break;
    }
  }
  JointDistribution pr = JointDistribution::from_flat(C, X, std::move(pr_weights));
  PriorDistribution prior = PriorDistribution::from_masses(jitter(rng, base_prior, kFrontierNoise));
  JointDistribution joint = joint_with_prior(prior, pr);

  if (cfg.model_kind == ModelKind::PriorOnly) {
    return {std::move(pr), {std::move(joint), std::move(prior)}};
  }
  JointDistribution jittered =
      JointDistribution::from_flat(C, X, jitter(rng, joint.weights(), kFrontierNoise));
  return {std::move(pr), {std::move(jittered), std::nullopt}};
}

// Half of the draws are independent; the other half are mixed toward the truth
// so that small-mismatch, small-KL pairs are represented.
std::vector<double> draw_near(CounterRng& rng, std::span<const double> truth) {
  const double alpha = log_uniform(rng, 0.1, 1.0);
  std::vector<double> draw = dirichlet(rng, truth.size(), alpha);
  if (rng.uniform() < 0.5) return draw;
  const double w = rng.uniform_open_low();
  for (std::size_t i = 0; i < draw.size(); ++i) draw[i] = (1.0 - w) * truth[i] + w * draw[i];
  return draw;
}

}  // namespace

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::Rejection: return "rejection";
    case Strategy::Constructive: return "constructive";
    case Strategy::FrontierPerturb: return "frontier_perturb";
  }
  return "unknown";
}

std::string_view to_string(ModelKind k) {
  switch (k) {
    case ModelKind::Joint: return "joint";
    case ModelKind::PriorOnly: return "prior_only";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "joint") return ModelKind::Joint;
  if (text == "prior_only") return ModelKind::PriorOnly;
  throw Error(ErrorKind::DomainError, "unknown model kind '" + std::string(text) + "'");
}

void SamplerConfig::validate() const {
  if (num_classes < 2) throw Error(ErrorKind::DomainError, "need at least two classes");
  if (num_observations < 1) throw Error(ErrorKind::DomainError, "need at least one observation");
  if (!(t > 0.0 && t < 0.5)) throw Error(ErrorKind::DomainError, "t must lie in (0, 0.5)");
  if (samples < 1) throw Error(ErrorKind::DomainError, "need at least one sample");
  const auto& m = strategy_mix;
  if (m.rejection < 0.0 || m.constructive < 0.0 || m.frontier_perturb < 0.0 ||
      !(m.rejection + m.constructive + m.frontier_perturb > 0.0)) {
    throw Error(ErrorKind::DomainError, "strategy weights must be non-negative, not all zero");
  }
}

Strategy choose_strategy(const SamplerConfig& config, std::uint64_t index) {
  const auto& m = config.strategy_mix;
  CounterRng rng(config.seed, index, kStrategyStream);
  const double u = rng.uniform() * (m.rejection + m.constructive + m.frontier_perturb);
  if (u < m.rejection) return Strategy::Rejection;
  if (u < m.rejection + m.constructive || m.frontier_perturb <= 0.0) return Strategy::Constructive;
  return Strategy::FrontierPerturb;
}

JointDistribution sample_true_distribution(const SamplerConfig& config, std::uint64_t index,
                                           Strategy strategy) {
  config.validate();
  switch (strategy) {
    case Strategy::Rejection: return sample_rejection(config, index);
    case Strategy::Constructive: return sample_constructive(config, index);
    case Strategy::FrontierPerturb:
      if (config.num_classes < 3 || config.num_observations < 2) {
        return sample_constructive(config, index);
      }
      return sample_frontier(config, index).pr;
  }
  return sample_constructive(config, index);
}

JointDistribution sample_true_distribution(const SamplerConfig& config, std::uint64_t index) {
  return sample_true_distribution(config, index, choose_strategy(config, index));
}

SampledModel sample_model(const SamplerConfig& config, std::uint64_t index,
                          const JointDistribution& pr) {
  CounterRng rng(config.seed, index, kModelStream);
  if (config.model_kind == ModelKind::PriorOnly) {
    const PriorDistribution pc = class_prior(pr);
    PriorDistribution prior = PriorDistribution::from_masses(draw_near(rng, pc.mass()));
    JointDistribution joint = joint_with_prior(prior, pr);
    return {std::move(joint), std::move(prior)};
  }
  return {JointDistribution::from_flat(pr.classes(), pr.observations(),
                                       draw_near(rng, pr.weights())),
          std::nullopt};
}

SampledPair sample_pair(const SamplerConfig& config, std::uint64_t index) {
  config.validate();
  const Strategy strategy = choose_strategy(config, index);
  if (strategy == Strategy::FrontierPerturb && config.num_classes >= 3 &&
      config.num_observations >= 2) {
    FrontierDraw draw = sample_frontier(config, index);
    return {strategy, std::move(draw.pr), std::move(draw.model)};
  }
  JointDistribution pr = sample_true_distribution(config, index, strategy);
  SampledModel model = sample_model(config, index, pr);
  return {strategy, std::move(pr), std::move(model)};
}

SimulationRecord evaluate_pair(const SamplerConfig& config, std::uint64_t index,
                               Strategy strategy, const JointDistribution& pr,
                               const SampledModel& model) {
  const DecisionReport report = mismatch(pr, model.joint);
  SimulationRecord r;
  r.index = index;
  r.strategy = strategy;
  r.bayes_error = report.bayes_error;
  r.delta = std::clamp(report.mismatch, 0.0, 1.0);
  r.kl = model.prior ? kl_divergence(class_prior(pr), *model.prior, config.base)
                     : kl_divergence(pr, model.joint, config.base);
  const BoundThreshold t(config.t);
  r.h = bound_h(r.delta, t, config.base);
  r.g = bound_g(r.delta, config.base);
  r.violated = std::isfinite(r.kl) && r.kl < r.h - kViolationTolerance;
  return r;
}

CoverageHistogram::CoverageHistogram(std::size_t delta_bins, std::size_t kl_bins, double kl_max)
    : delta_bins_(delta_bins), kl_bins_(kl_bins), kl_max_(kl_max),
      counts_(delta_bins * kl_bins, 0) {
  if (delta_bins < 1 || kl_bins < 1 || !(kl_max > 0.0)) {
    throw Error(ErrorKind::DomainError, "histogram needs positive bin counts and range");
  }
}

void CoverageHistogram::add(double delta, double kl) {
  if (!std::isfinite(kl) || !std::isfinite(delta)) return;
  const auto bin = [](double v, double hi, std::size_t bins) {
    const double scaled = std::clamp(v / hi, 0.0, 1.0) * static_cast<double>(bins);
    return std::min(bins - 1, static_cast<std::size_t>(scaled));
  };
  ++counts_[bin(delta, 1.0, delta_bins_) * kl_bins_ + bin(kl, kl_max_, kl_bins_)];
}

void CoverageHistogram::merge(const CoverageHistogram& other) {
  if (other.delta_bins_ != delta_bins_ || other.kl_bins_ != kl_bins_ ||
      other.kl_max_ != kl_max_) {
    throw Error(ErrorKind::ShapeMismatch, "histograms have different binning");
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
}

std::uint64_t CoverageHistogram::total() const noexcept {
  std::uint64_t sum = 0;
  for (auto c : counts_) sum += c;
  return sum;
}

std::size_t CoverageHistogram::cells_hit() const noexcept {
  return static_cast<std::size_t>(std::count_if(counts_.begin(), counts_.end(),
                                                [](std::uint64_t c) { return c > 0; }));
}

CoverageHistogram coverage_report(std::span<const SimulationRecord> records,
                                  std::size_t delta_bins, std::size_t kl_bins, double kl_max) {
  CoverageHistogram hist(delta_bins, kl_bins, kl_max);
  for (const auto& r : records) hist.add(r.delta, r.kl);
  return hist;
}

void ScatterSummary::add(const SimulationRecord& r) {
  ++records;
  if (r.violated) ++violations;
  if (!std::isfinite(r.kl)) {
    ++infinite_kl;
    return;
  }
  max_gap = std::max(max_gap, r.h - r.kl);
  if (r.kl - r.h <= 1e-3 && r.h > r.g + 0.05) ++near_curve_informative;
  coverage.add(r.delta, r.kl);
}

void ScatterSummary::merge(const ScatterSummary& other) {
  records += other.records;
  violations += other.violations;
  infinite_kl += other.infinite_kl;
  max_gap = std::max(max_gap, other.max_gap);
  near_curve_informative += other.near_curve_informative;
  coverage.merge(other.coverage);
}

ScatterResult run_scatter(const SamplerConfig& config) {
  config.validate();
  ScatterResult result;
  result.records.resize(config.samples);
  parallel_for_chunks(config.samples, worker_count(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const std::uint64_t index = config.first_index + i;
      const SampledPair pair = sample_pair(config, index);
      result.records[i] = evaluate_pair(config, index, pair.strategy, pair.pr, pair.model);
    }
  });
  for (const auto& r : result.records) result.summary.add(r);
  return result;
}

std::string scatter_csv(std::span<const SimulationRecord> records, const ScatterSummary& summary) {
  std::ostringstream out;
  out << "index,strategy,bayes_error,delta,kl,violated\n";
  for (const auto& r : records) {
    out << r.index << ',' << to_string(r.strategy) << ',' << format_shortest(r.bayes_error) << ','
        << format_shortest(r.delta) << ',' << format_shortest(r.kl) << ','
        << (r.violated ? 1 : 0) << '\n';
  }
  out << "# violations=" << summary.violations << " max_gap=" << format_shortest(summary.max_gap)
      << '\n';
  return out.str();
}

}  // namespace errbound
