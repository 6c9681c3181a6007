#include "errbound/log_base.hpp"

#include <charconv>
#include <cmath>

#include "errbound/error.hpp"

namespace errbound {

LogBase::LogBase(double base) : base_(base), ln_base_(std::log(base)), natural_(false) {
  if (!std::isfinite(base) || base <= 0.0 || base == 1.0) {
    throw Error(ErrorKind::DomainError, "log base must be positive and different from 1");
  }
  if (base == std::exp(1.0)) {
    *this = LogBase();
  }
}

LogBase LogBase::parse(const std::string& text) {
  if (text == "e" || text == "E") return LogBase();
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorKind::DomainError, "unrecognized log base '" + text + "'");
  }
  return LogBase(value);
}

double LogBase::log(double x) const noexcept { return from_nats(std::log(x)); }

std::string LogBase::label() const {
  if (natural_) return "e";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), base_);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace errbound
