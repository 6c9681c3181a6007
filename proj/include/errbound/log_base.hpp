#pragma once

#include <string>

namespace errbound {

/// Logarithm base used when reporting information quantities.
///
/// All computations run in nats; a LogBase only rescales results, so a value
/// in base b is exactly the natural-log value divided by ln(b).
class LogBase {
 public:
  /// Natural log.
  LogBase() = default;

  /// Throws DomainError unless base > 0 and base != 1.
  explicit LogBase(double base);

  static LogBase natural() { return LogBase(); }

  /// Parses "e", "2", "10" or any other positive number other than 1.
  static LogBase parse(const std::string& text);

  double base() const noexcept { return base_; }
  bool is_natural() const noexcept { return natural_; }

  double from_nats(double nats) const noexcept { return natural_ ? nats : nats / ln_base_; }
  double log(double x) const noexcept;

  /// "e" for the natural log, otherwise the shortest decimal form of the base.
  std::string label() const;

 private:
  double base_ = 2.718281828459045;
  double ln_base_ = 1.0;
  bool natural_ = true;
};

}  // namespace errbound
