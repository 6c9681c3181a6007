#include "commands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "errbound/bounds.hpp"
#include "errbound/error.hpp"
#include "errbound/frontier.hpp"
#include "errbound/rng.hpp"
#include "errbound/sequences.hpp"
#include "errbound/simulation.hpp"
#include "errbound/text_io.hpp"
#include "svg.hpp"

namespace errbound::cli {
namespace {

constexpr double kFrontierGapLimit = 1e-4;
constexpr double kFrontierStrictEpsilon = 1e-8;
constexpr std::uint64_t kPriorStream = 1;

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorKind::DomainError, message);
}

std::string count_text(std::uint64_t v) { return std::to_string(v); }

void write_artifact(const std::optional<std::string>& path, const std::string& content) {
  if (!path) {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream file(*path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorKind::DomainError, "cannot open " + *path + " for writing");
  file << content;
  if (!file.flush()) throw Error(ErrorKind::DomainError, "failed writing " + *path);
}

SequenceTask load_task(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::DomainError, "cannot open " + path);
  return read_sequence_task(in);
}

}  // namespace

std::string RunManifest::csv_block() const {
  std::ostringstream out;
  out << "# command: " << command << '\n';
  out << "# config:";
  for (const auto& [key, value] : config) out << " --" << key << ' ' << value;
  out << '\n';
  out << "# seed: " << seed << '\n';
  out << "# rng: " << kRngAlgorithm << '\n';
  out << "# version: " << kArtifactVersion << '\n';
  out << "# log_base: " << base.label() << '\n';
  return out.str();
}

std::string RunManifest::svg_block() const {
  std::string block = "<!--\n";
  block += csv_block();
  block += "-->\n";
  return block;
}

int run_bounds(const BoundsOptions& options, std::ostream& log) {
  const LogBase base = LogBase::parse(options.log_base);
  const BoundThreshold t(options.t);
  require(options.t > 0.0, "t must be positive for the linear bound");
  require(options.grid >= 2, "grid needs at least two points");

  RunManifest manifest{"bounds",
                       {{"t", format_shortest(options.t)},
                        {"grid", count_text(options.grid)},
                        {"log-base", base.label()}},
                       0,
                       base};
  std::array<BoundCurve, 3> curves = {
      sample_curve(BoundKind::UnconstrainedG, t, options.grid, base),
      sample_curve(BoundKind::RefinedH, t, options.grid, base),
      sample_curve(BoundKind::Linear, t, options.grid, base)};

  if (options.format == OutputFormat::Svg) {
    write_artifact(options.out, render_svg(curves, {}, manifest.svg_block()));
  } else {
    std::string csv = manifest.csv_block();
    for (std::size_t i = 0; i < curves.size(); ++i) csv += bound_curve_csv(curves[i], i == 0);
    write_artifact(options.out, csv);
  }
  log << "bounds: " << 3 * options.grid << " rows\n";
  return kOk;
}

int run_simulate(const SimulateOptions& options, std::ostream& log) {
  SamplerConfig config;
  config.num_classes = options.classes;
  config.num_observations = options.observations;
  config.t = options.t;
  config.samples = options.samples;
  config.seed = options.seed;
  config.first_index = options.start_index;
  config.model_kind = parse_model_kind(options.model_kind);
  config.base = LogBase::parse(options.log_base);
  config.validate();

  RunManifest manifest{"simulate",
                       {{"t", format_shortest(options.t)},
                        {"classes", count_text(options.classes)},
                        {"observations", count_text(options.observations)},
                        {"samples", count_text(options.samples)},
                        {"start-index", count_text(options.start_index)},
                        {"model-kind", std::string(to_string(config.model_kind))},
                        {"log-base", config.base.label()}},
                       options.seed,
                       config.base};
  const ScatterResult result = run_scatter(config);

  if (options.format == OutputFormat::Svg) {
    const BoundThreshold t(options.t);
    std::array<BoundCurve, 2> curves = {
        sample_curve(BoundKind::UnconstrainedG, t, 201, config.base),
        sample_curve(BoundKind::RefinedH, t, 201, config.base)};
    write_artifact(options.out, render_svg(curves, result.records, manifest.svg_block()));
  } else {
    write_artifact(options.out,
                   manifest.csv_block() + scatter_csv(result.records, result.summary));
  }

  const auto& s = result.summary;
  log << "simulate: records=" << s.records << " violations=" << s.violations
      << " infinite_kl=" << s.infinite_kl << " max_gap=" << format_shortest(s.max_gap)
      << " coverage_cells=" << s.coverage_cells_hit() << '\n';
  return options.check && s.violations > 0 ? kViolation : kOk;
}

int run_frontier(const FrontierOptions& options, std::ostream& log) {
  const LogBase base = LogBase::parse(options.log_base);
  require(options.epsilon > 0.0, "epsilon must be positive");
  const std::vector<double> lambdas = lambda_grid(options.t, options.lambda_steps);
  const std::vector<FrontierRow> rows = sweep_frontier(options.t, lambdas, options.epsilon, base);

  RunManifest manifest{"frontier",
                       {{"t", format_shortest(options.t)},
                        {"lambda-steps", count_text(options.lambda_steps)},
                        {"epsilon", format_shortest(options.epsilon)},
                        {"log-base", base.label()}},
                       0,
                       base};
  write_artifact(options.out, manifest.csv_block() + frontier_csv(rows));

  double max_gap = 0.0;
  double min_gap = 0.0;
  for (const auto& r : rows) {
    max_gap = std::max(max_gap, std::abs(r.gap));
    min_gap = std::min(min_gap, r.gap);
  }
  log << "frontier: rows=" << rows.size() << " max_abs_gap=" << format_shortest(max_gap) << '\n';
  if (min_gap < -kViolationTolerance) return kViolation;
  if (options.epsilon <= kFrontierStrictEpsilon && max_gap > kFrontierGapLimit) return kViolation;
  return kOk;
}

int run_sequence_chain(const SequenceChainOptions& options, std::ostream& log) {
  const LogBase base = LogBase::parse(options.log_base);
  std::vector<SequenceTask> tasks;
  RunManifest manifest{"sequence-chain", {}, options.seed, base};
  if (options.task_file) {
    tasks.push_back(load_task(*options.task_file));
    manifest.config = {{"task-file", *options.task_file}, {"log-base", base.label()}};
  } else {
    require(options.tasks >= 1, "need at least one task");
    const SequenceShape shape{options.length, options.classes, options.xcount};
    shape.validate();
    static_cast<void>(BoundThreshold(options.t));
    tasks.reserve(options.tasks);
    for (std::size_t i = 0; i < options.tasks; ++i) {
      CounterRng rng(options.seed, i);
      const auto kind = i % 2 == 0 ? RandomModel::Independent : RandomModel::Perturbed;
      tasks.push_back(random_sequence_task(rng, shape, options.t, kind));
    }
    manifest.config = {{"tasks", count_text(options.tasks)},
                       {"N", count_text(options.length)},
                       {"classes", count_text(options.classes)},
                       {"xcount", count_text(options.xcount)},
                       {"t", format_shortest(options.t)},
                       {"log-base", base.label()}};
  }

  std::ostringstream csv;
  csv << manifest.csv_block();
  csv << "task,kl_joint,kl_conditional,kl_marginal_avg,h_avg,h_of_mean,mean_delta,"
         "link_joint_conditional,link_conditional_marginal,link_marginal_h,link_h_mean\n";
  std::size_t failures = 0;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const ChainReport chain = kl_chain(tasks[i], base);
    const auto links = chain.links();
    csv << i << ',' << format_shortest(chain.kl_joint) << ','
        << format_shortest(chain.kl_conditional) << ',' << format_shortest(chain.kl_marginal_avg)
        << ',' << format_shortest(chain.h_avg) << ',' << format_shortest(chain.h_of_mean) << ','
        << format_shortest(chain.mean_delta);
    for (bool ok : links) csv << ',' << (ok ? 1 : 0);
    csv << '\n';
    if (!chain.holds()) ++failures;
  }
  write_artifact(options.out, csv.str());
  log << "sequence-chain: tasks=" << tasks.size() << " failing=" << failures << '\n';
  return failures > 0 ? kViolation : kOk;
}

int run_ppl_demo(const PplDemoOptions& options, std::ostream& log) {
  const LogBase base = LogBase::parse(options.log_base);
  std::vector<SequenceTask> tasks;
  RunManifest manifest{"ppl-demo", {}, options.seed, base};
  if (options.task_file) {
    tasks.push_back(load_task(*options.task_file));
    manifest.config = {{"task-file", *options.task_file}, {"log-base", base.label()}};
  } else {
    require(options.models >= 1, "need at least one model");
    require(options.t > 0.0, "t must be positive for the linear bound");
    const SequenceShape shape{options.length, options.classes, options.xcount};
    shape.validate();
    static_cast<void>(BoundThreshold(options.t));
    CounterRng truth_rng(options.seed, 0);
    const JointDistribution pr = random_sequence_truth(truth_rng, shape, options.t);
    const PriorDistribution truth_prior = class_prior(pr);
    tasks.reserve(options.models);
    for (std::size_t m = 0; m < options.models; ++m) {
      CounterRng rng(options.seed, m, kPriorStream);
      tasks.push_back(SequenceTask::from_prior(shape, options.t, pr,
                                               random_sequence_prior(rng, truth_prior)));
    }
    manifest.config = {{"models", count_text(options.models)},
                       {"N", count_text(options.length)},
                       {"classes", count_text(options.classes)},
                       {"xcount", count_text(options.xcount)},
                       {"t", format_shortest(options.t)},
                       {"log-base", base.label()}};
  }

  const std::vector<PplRow> rows = ppl_wer_demo(tasks, base);
  std::ostringstream csv;
  csv << manifest.csv_block();
  csv << "model_id,log_ppl,log_ppl_per_token,hamming_error,bound_rhs,holds\n";
  std::size_t failures = 0;
  for (const auto& r : rows) {
    csv << r.model_id << ',' << format_shortest(r.log_ppl) << ','
        << format_shortest(r.log_ppl_per_token) << ',' << format_shortest(r.hamming_error) << ','
        << format_shortest(r.bound_rhs) << ',' << (r.holds ? 1 : 0) << '\n';
    if (!r.holds) ++failures;
  }
  write_artifact(options.out, csv.str());
  log << "ppl-demo: models=" << rows.size() << " failing=" << failures << '\n';
  return failures > 0 ? kViolation : kOk;
}

}  // namespace errbound::cli
