#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "errbound/distributions.hpp"
#include "errbound/log_base.hpp"

namespace errbound {

enum class Strategy { Rejection, Constructive, FrontierPerturb };
enum class ModelKind { Joint, PriorOnly };

std::string_view to_string(Strategy s);
std::string_view to_string(ModelKind k);
/// Accepts "joint" and "prior_only". Throws DomainError otherwise.
ModelKind parse_model_kind(std::string_view text);

struct StrategyMix {
  double rejection = 0.2;
  double constructive = 0.5;
  double frontier_perturb = 0.3;
};

/// Upper limit on rejection attempts for a single draw.
inline constexpr std::uint64_t kMaxRejectionAttempts = 1'000'000;
/// Relative jitter applied to frontier-family entries.
inline constexpr double kFrontierNoise = 1e-3;
/// A record is a violation when kl < h(delta, t) - kViolationTolerance.
inline constexpr double kViolationTolerance = 1e-9;

struct SamplerConfig {
  std::size_t num_classes = 7;
  std::size_t num_observations = 15;
  double t = 0.01;
  std::uint64_t samples = 1;
  std::uint64_t seed = 0;
  /// Index of the first record; lets a run be split into disjoint ranges.
  std::uint64_t first_index = 0;
  StrategyMix strategy_mix;
  ModelKind model_kind = ModelKind::Joint;
  LogBase base;

  /// Throws DomainError on an unusable configuration.
  void validate() const;
};

/// A model draw. For ModelKind::PriorOnly the joint is q'(c) pr(x|c) and the
/// prior is kept alongside it.
struct SampledModel {
  JointDistribution joint;
  std::optional<PriorDistribution> prior;
};

struct SampledPair {
  Strategy strategy;
  JointDistribution pr;
  SampledModel model;
};

struct SimulationRecord {
  std::uint64_t index = 0;
  Strategy strategy = Strategy::Rejection;
  double bayes_error = 0.0;
  double delta = 0.0;
  double kl = 0.0;  // may be +infinity
  double h = 0.0;   // refined bound at delta
  double g = 0.0;   // unconstrained bound at delta
  bool violated = false;

  friend bool operator==(const SimulationRecord&, const SimulationRecord&) = default;
};

/// Counts of finite-KL records on a grid over [0, 1] x [0, kl_max]; larger KL
/// values land in the top row.
class CoverageHistogram {
 public:
  CoverageHistogram(std::size_t delta_bins, std::size_t kl_bins, double kl_max = 1.0);

  void add(double delta, double kl);
  void merge(const CoverageHistogram& other);

  std::size_t delta_bins() const noexcept { return delta_bins_; }
  std::size_t kl_bins() const noexcept { return kl_bins_; }
  double kl_max() const noexcept { return kl_max_; }
  std::uint64_t at(std::size_t delta_bin, std::size_t kl_bin) const {
    return counts_[delta_bin * kl_bins_ + kl_bin];
  }
  std::uint64_t total() const noexcept;
  std::size_t cells_hit() const noexcept;

 private:
  std::size_t delta_bins_;
  std::size_t kl_bins_;
  double kl_max_;
  std::vector<std::uint64_t> counts_;
};

CoverageHistogram coverage_report(std::span<const SimulationRecord> records,
                                  std::size_t delta_bins, std::size_t kl_bins,
                                  double kl_max = 1.0);

/// Commutative fold over records.
struct ScatterSummary {
  std::uint64_t records = 0;
  std::uint64_t violations = 0;
  std::uint64_t infinite_kl = 0;
  /// max(h - kl) over finite records; negative when every point is above the curve.
  double max_gap = -std::numeric_limits<double>::infinity();
  /// Finite records within 1e-3 of h where h exceeds g by more than 0.05.
  std::uint64_t near_curve_informative = 0;
  CoverageHistogram coverage{20, 20};

  void add(const SimulationRecord& r);
  void merge(const ScatterSummary& other);
  std::size_t coverage_cells_hit() const noexcept { return coverage.cells_hit(); }
};

struct ScatterResult {
  std::vector<SimulationRecord> records;
  ScatterSummary summary;
};

/// Strategy assigned to a draw by the configured mix.
Strategy choose_strategy(const SamplerConfig& config, std::uint64_t index);

/// True distribution with bayes_error <= t, deterministic in (seed, index).
/// Throws SamplerExhausted when rejection runs out of attempts.
JointDistribution sample_true_distribution(const SamplerConfig& config, std::uint64_t index,
                                           Strategy strategy);
JointDistribution sample_true_distribution(const SamplerConfig& config, std::uint64_t index);

/// Joint kind: independent symmetric simplex draw over classes x observations.
/// Prior-only kind: random q'(c) combined with pr(x|c).
SampledModel sample_model(const SamplerConfig& config, std::uint64_t index,
                          const JointDistribution& pr);

/// Full draw for one record index, including the frontier-perturbation path
/// that builds pr and the model together.
SampledPair sample_pair(const SamplerConfig& config, std::uint64_t index);

/// Reduces a pair to its record. For PriorOnly models the KL is taken between
/// class priors.
SimulationRecord evaluate_pair(const SamplerConfig& config, std::uint64_t index,
                               Strategy strategy, const JointDistribution& pr,
                               const SampledModel& model);

/// Records for indices first_index .. first_index + samples - 1, in index order.
/// Work is spread across worker_count() threads.
ScatterResult run_scatter(const SamplerConfig& config);

/// Header "index,strategy,bayes_error,delta,kl,violated", one row per record,
/// then "# violations=N max_gap=G".
std::string scatter_csv(std::span<const SimulationRecord> records, const ScatterSummary& summary);

}  // namespace errbound
