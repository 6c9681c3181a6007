#include "errbound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "errbound/error.hpp"
#include "errbound/text_io.hpp"

namespace errbound {
namespace {

// x log x with the 0 log 0 = 0 convention.
double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

double checked_delta(double delta) {
  if (!(delta >= -kDeltaClampTolerance && delta <= 1.0 + kDeltaClampTolerance)) {
    throw Error(ErrorKind::DomainError, "mismatch " + std::to_string(delta) + " outside [0, 1]");
  }
  return std::clamp(delta, 0.0, 1.0);
}

double g_nats(double delta) { return 0.5 * (xlogx(1.0 + delta) + xlogx(1.0 - delta)); }

double h_nats(double delta, double t) {
  if (delta >= 1.0 - 2.0 * t) return g_nats(delta);
  const double scale = delta + 2.0 * t;
  if (scale <= 0.0) return 0.0;
  return scale * g_nats(delta / scale);
}

double require_positive(BoundThreshold t) {
  if (t.value() <= 0.0) {
    throw Error(ErrorKind::DomainError, "linear bound needs t > 0");
  }
  return t.value();
}

}  // namespace

BoundThreshold::BoundThreshold(double t) : t_(t) {
  if (!(t >= 0.0 && t < 0.5)) {
    throw Error(ErrorKind::DomainError, "threshold t=" + std::to_string(t) + " outside [0, 0.5)");
  }
}

double bound_g(double delta, LogBase base) { return base.from_nats(g_nats(checked_delta(delta))); }

double bound_h(double delta, BoundThreshold t, LogBase base) {
  return base.from_nats(h_nats(checked_delta(delta), t.value()));
}

double linear_slope(BoundThreshold t, LogBase base) {
  return base.from_nats(std::log(2.0 - 2.0 * t.value()));
}

double linear_intercept(BoundThreshold t, LogBase base) {
  const double tv = require_positive(t);
  return base.from_nats(tv * (std::log1p(-tv) + std::log(tv) + 2.0 * std::numbers::ln2));
}

double bound_linear(double delta, BoundThreshold t, LogBase base) {
  const double d = checked_delta(delta);
  const double tv = require_positive(t);
  const double nats =
      std::log(2.0 - 2.0 * tv) * d + tv * (std::log1p(-tv) + std::log(tv) + 2.0 * std::numbers::ln2);
  return base.from_nats(nats);
}

std::string_view to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::UnconstrainedG: return "unconstrained_g";
    case BoundKind::RefinedH: return "refined_h";
    case BoundKind::Linear: return "linear";
  }
  return "unknown";
}

BoundCurve sample_curve(BoundKind kind, BoundThreshold t, std::size_t grid_size, LogBase base) {
  if (grid_size < 2) throw Error(ErrorKind::DomainError, "grid needs at least two points");
  BoundCurve curve{kind, t.value(), base, {}};
  curve.points.reserve(grid_size);
  const double step = 1.0 / static_cast<double>(grid_size - 1);
  for (std::size_t i = 0; i < grid_size; ++i) {
    const double delta = i + 1 == grid_size ? 1.0 : static_cast<double>(i) * step;
    double value = 0.0;
    switch (kind) {
      case BoundKind::UnconstrainedG: value = bound_g(delta, base); break;
      case BoundKind::RefinedH: value = bound_h(delta, t, base); break;
      case BoundKind::Linear: value = bound_linear(delta, t, base); break;
    }
    curve.points.push_back({delta, value});
  }
  return curve;
}

std::string bound_curve_csv(const BoundCurve& curve, bool with_header) {
  std::ostringstream out;
  if (with_header) out << "delta,value,kind,t,log_base\n";
  const std::string kind(to_string(curve.kind));
  const std::string t = format_sig17(curve.t);
  const std::string base = curve.base.label();
  for (const auto& p : curve.points) {
    out << format_sig17(p.delta) << ',' << format_sig17(p.value) << ',' << kind << ',' << t << ','
        << base << '\n';
  }
  return out.str();
}

}  // namespace errbound
