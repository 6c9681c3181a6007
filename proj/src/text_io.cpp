#include "errbound/text_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "errbound/error.hpp"

namespace errbound {
namespace {

std::string non_finite(double value) {
  if (std::isnan(value)) return "nan";
  return value > 0 ? "inf" : "-inf";
}

std::string next_token(std::istream& in, const char* what) {
  std::string token;
  if (!(in >> token)) throw Error(ErrorKind::ParseError, std::string("missing ") + what);
  return token;
}

double parse_number(const std::string& token) {
  double value = 0.0;
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), last, value);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorKind::ParseError, "not a number: '" + token + "'");
  }
  return value;
}

std::size_t parse_count(const std::string& token) {
  std::size_t value = 0;
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), last, value);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorKind::ParseError, "not a count: '" + token + "'");
  }
  return value;
}

std::vector<double> read_values(std::istream& in, std::size_t n, const char* what) {
  std::vector<double> values(n);
  for (double& v : values) v = parse_number(next_token(in, what));
  return values;
}

void write_rows(std::ostream& out, std::span<const double> flat, std::size_t rows,
                std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c > 0) out << ' ';
      out << format_shortest(flat[r * cols + c]);
    }
    out << '\n';
  }
}

}  // namespace

std::string format_shortest(double value) {
  if (!std::isfinite(value)) return non_finite(value);
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

std::string format_sig17(double value) {
  if (!std::isfinite(value)) return non_finite(value);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_distribution(std::ostream& out, const JointDistribution& d) {
  out << d.classes() << ' ' << d.observations() << '\n';
  write_rows(out, d.weights(), d.classes(), d.observations());
}

std::string distribution_text(const JointDistribution& d) {
  std::ostringstream out;
  write_distribution(out, d);
  return out.str();
}

JointDistribution read_distribution(std::istream& in) {
  const std::size_t classes = parse_count(next_token(in, "class count"));
  const std::size_t observations = parse_count(next_token(in, "observation count"));
  if (classes == 0 || observations == 0) throw Error(ErrorKind::BadShape, "empty table");
  return JointDistribution::from_flat(classes, observations,
                                      read_values(in, classes * observations, "table entry"));
}

void write_sequence_task(std::ostream& out, const SequenceTask& task) {
  const SequenceShape& shape = task.shape();
  const std::size_t rows = shape.sequence_count();
  out << shape.length << ' ' << shape.classes << ' ' << shape.observations << ' '
      << format_shortest(task.t()) << '\n';
  write_rows(out, task.pr().weights(), rows, shape.observations);
  if (task.q_prior()) {
    out << "PRIOR\n";
    write_rows(out, task.q_prior()->mass(), 1, rows);
  } else {
    write_rows(out, task.q().weights(), rows, shape.observations);
  }
}

SequenceTask read_sequence_task(std::istream& in) {
  SequenceShape shape;
  shape.length = parse_count(next_token(in, "sequence length"));
  shape.classes = parse_count(next_token(in, "class count"));
  shape.observations = parse_count(next_token(in, "observation count"));
  const double t = parse_number(next_token(in, "threshold"));
  const std::size_t rows = shape.sequence_count();
  const std::size_t cells = rows * shape.observations;
  JointDistribution pr =
      JointDistribution::from_flat(rows, shape.observations, read_values(in, cells, "pr entry"));

  const std::string marker = next_token(in, "model section");
  if (marker == "PRIOR") {
    return SequenceTask::from_prior(
        shape, t, std::move(pr),
        PriorDistribution::from_masses(read_values(in, rows, "prior entry")));
  }
  if (marker == "CONDITIONAL") {
    const std::vector<double> flat = read_values(in, cells, "conditional entry");
    std::vector<std::vector<double>> columns(shape.observations, std::vector<double>(rows));
    for (std::size_t s = 0; s < rows; ++s) {
      for (std::size_t x = 0; x < shape.observations; ++x) {
        columns[x][s] = flat[s * shape.observations + x];
      }
    }
    return SequenceTask::from_conditional(shape, t, std::move(pr),
                                          PosteriorModel::from_columns(columns));
  }
  std::vector<double> flat(cells);
  flat[0] = parse_number(marker);
  for (std::size_t i = 1; i < cells; ++i) flat[i] = parse_number(next_token(in, "q entry"));
  return SequenceTask::from_joint(
      shape, t, std::move(pr), JointDistribution::from_flat(rows, shape.observations, flat));
}

}  // namespace errbound
