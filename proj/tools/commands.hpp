#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errbound/log_base.hpp"

namespace errbound::cli {

inline constexpr const char* kArtifactVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kViolation = 1, kUsage = 2 };

enum class OutputFormat { Csv, Svg };

struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> config;
  std::uint64_t seed = 0;
  LogBase base;

  /// One "# key: value" line per field.
  std::string csv_block() const;
  std::string svg_block() const;
};

struct BoundsOptions {
  double t = 0.01;
  std::size_t grid = 101;
  std::string log_base = "e";
  std::optional<std::string> out;
  OutputFormat format = OutputFormat::Csv;
};

struct SimulateOptions {
  double t = 0.01;
  std::size_t classes = 7;
  std::size_t observations = 15;
  std::uint64_t samples = 1000;
  std::uint64_t seed = 0;
  std::uint64_t start_index = 0;
  std::string model_kind = "joint";
  std::string log_base = "e";
  bool check = false;
  std::optional<std::string> out;
  OutputFormat format = OutputFormat::Csv;
};

struct FrontierOptions {
  double t = 0.01;
  std::size_t lambda_steps = 50;
  double epsilon = 1e-8;
  std::string log_base = "e";
  std::optional<std::string> out;
};

struct SequenceChainOptions {
  std::size_t tasks = 100;
  std::size_t length = 2;
  std::size_t classes = 2;
  std::size_t xcount = 3;
  double t = 0.2;
  std::uint64_t seed = 0;
  std::string log_base = "e";
  std::optional<std::string> task_file;
  std::optional<std::string> out;
};

struct PplDemoOptions {
  std::size_t models = 50;
  std::size_t length = 2;
  std::size_t classes = 3;
  std::size_t xcount = 3;
  double t = 0.05;
  std::uint64_t seed = 0;
  std::string log_base = "e";
  std::optional<std::string> task_file;
  std::optional<std::string> out;
};

// Each command writes its artifact to --out or stdout and a one-line summary
// to `log`. Library errors propagate as errbound::Error.
int run_bounds(const BoundsOptions& options, std::ostream& log);
int run_simulate(const SimulateOptions& options, std::ostream& log);
int run_frontier(const FrontierOptions& options, std::ostream& log);
int run_sequence_chain(const SequenceChainOptions& options, std::ostream& log);
int run_ppl_demo(const PplDemoOptions& options, std::ostream& log);

}  // namespace errbound::cli
