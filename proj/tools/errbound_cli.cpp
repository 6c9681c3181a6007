#include <CLI11.hpp>

#include <exception>
#include <iostream>
#include <map>
#include <string>

#include "commands.hpp"
#include "errbound/error.hpp"

namespace {

using errbound::cli::OutputFormat;

const std::map<std::string, OutputFormat> kFormats = {{"csv", OutputFormat::Csv},
                                                      {"svg", OutputFormat::Svg}};

void add_log_base(CLI::App* cmd, std::string& target) {
  cmd->add_option("--log-base", target, "Logarithm base: e or a positive number other than 1")
      ->capture_default_str();
}

void add_out(CLI::App* cmd, std::optional<std::string>& target) {
  cmd->add_option("--out", target, "Output file (default: stdout)");
}

void add_format(CLI::App* cmd, OutputFormat& target) {
  cmd->add_option("--format", target, "Output format")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = errbound::cli;
  CLI::App app{"Error-mismatch bounds, simulations and sequence checks"};
  app.set_version_flag("--version", std::string(cli::kArtifactVersion));
  app.require_subcommand(1);

  cli::BoundsOptions bounds;
  auto* bounds_cmd = app.add_subcommand("bounds", "Sample the g, h and linear bound curves");
  bounds_cmd->add_option("--t", bounds.t, "Bayes error threshold in (0, 0.5)")->capture_default_str();
  bounds_cmd->add_option("--grid", bounds.grid, "Grid points over [0, 1]")->capture_default_str();
  add_log_base(bounds_cmd, bounds.log_base);
  add_out(bounds_cmd, bounds.out);
  add_format(bounds_cmd, bounds.format);

  cli::SimulateOptions simulate;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo scatter of (mismatch, KL) pairs");
  sim_cmd->add_option("--t", simulate.t, "Bayes error threshold in (0, 0.5)")->capture_default_str();
  sim_cmd->add_option("--classes", simulate.classes)->capture_default_str();
  sim_cmd->add_option("--observations", simulate.observations)->capture_default_str();
  sim_cmd->add_option("--samples", simulate.samples)->capture_default_str();
  sim_cmd->add_option("--seed", simulate.seed)->capture_default_str();
  sim_cmd->add_option("--start-index", simulate.start_index, "Index of the first record")
      ->capture_default_str();
  sim_cmd->add_option("--model-kind", simulate.model_kind, "joint or prior_only")
      ->capture_default_str();
  sim_cmd->add_flag("--check", simulate.check, "Exit 1 when any record violates the bound");
  add_log_base(sim_cmd, simulate.log_base);
  add_out(sim_cmd, simulate.out);
  add_format(sim_cmd, simulate.format);

  cli::FrontierOptions frontier;
  auto* frontier_cmd = app.add_subcommand("frontier", "Sweep the equality-achieving prior family");
  frontier_cmd->add_option("--t", frontier.t)->capture_default_str();
  frontier_cmd->add_option("--lambda-steps", frontier.lambda_steps)->capture_default_str();
  frontier_cmd->add_option("--epsilon", frontier.epsilon)->capture_default_str();
  add_log_base(frontier_cmd, frontier.log_base);
  add_out(frontier_cmd, frontier.out);

  cli::SequenceChainOptions chain;
  auto* chain_cmd = app.add_subcommand("sequence-chain", "Check the sequence KL chain on random tasks");
  chain_cmd->add_option("--tasks", chain.tasks)->capture_default_str();
  chain_cmd->add_option("--N", chain.length, "Sequence length")->capture_default_str();
  chain_cmd->add_option("--classes", chain.classes)->capture_default_str();
  chain_cmd->add_option("--xcount", chain.xcount, "Number of observations")->capture_default_str();
  chain_cmd->add_option("--t", chain.t)->capture_default_str();
  chain_cmd->add_option("--seed", chain.seed)->capture_default_str();
  chain_cmd->add_option("--task-file", chain.task_file, "Read a single task instead")
      ->check(CLI::ExistingFile);
  add_log_base(chain_cmd, chain.log_base);
  add_out(chain_cmd, chain.out);

  cli::PplDemoOptions ppl;
  auto* ppl_cmd = app.add_subcommand("ppl-demo", "Prior cross entropy against Hamming error");
  ppl_cmd->add_option("--models", ppl.models)->capture_default_str();
  ppl_cmd->add_option("--N", ppl.length, "Sequence length")->capture_default_str();
  ppl_cmd->add_option("--classes", ppl.classes)->capture_default_str();
  ppl_cmd->add_option("--xcount", ppl.xcount, "Number of observations")->capture_default_str();
  ppl_cmd->add_option("--t", ppl.t)->capture_default_str();
  ppl_cmd->add_option("--seed", ppl.seed)->capture_default_str();
  ppl_cmd->add_option("--task-file", ppl.task_file, "Read a single task instead")
      ->check(CLI::ExistingFile);
  add_log_base(ppl_cmd, ppl.log_base);
  add_out(ppl_cmd, ppl.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? cli::kOk : cli::kUsage;
  }

  try {
    if (*bounds_cmd) return cli::run_bounds(bounds, std::cerr);
    if (*sim_cmd) return cli::run_simulate(simulate, std::cerr);
    if (*frontier_cmd) return cli::run_frontier(frontier, std::cerr);
    if (*chain_cmd) return cli::run_sequence_chain(chain, std::cerr);
    if (*ppl_cmd) return cli::run_ppl_demo(ppl, std::cerr);
  } catch (const errbound::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kUsage;
  }
  return cli::kUsage;
}
