#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "errbound/log_base.hpp"

namespace errbound {

/// Cap t on the Bayes error, 0 <= t < 0.5.
class BoundThreshold {
 public:
  /// Throws DomainError outside [0, 0.5).
  explicit BoundThreshold(double t);
  double value() const noexcept { return t_; }

 private:
  double t_;
};

/// Mismatch values within this distance outside [0, 1] are clamped rather than rejected.
inline constexpr double kDeltaClampTolerance = 1e-9;

/// Unconstrained bound 1/2 [(1+d) log(1+d) + (1-d) log(1-d)], d in [0, 1].
double bound_g(double delta, LogBase base = LogBase::natural());

/// Refined bound under E* <= t:
///   (d + 2t) g(d / (d + 2t))   for d < 1 - 2t
///   g(d)                       otherwise
double bound_h(double delta, BoundThreshold t, LogBase base = LogBase::natural());

/// Tangent of h at d = 1 - 2t: log(2 - 2t) d + t (log(1-t) + log t + 2 log 2).
/// Requires t > 0.
double bound_linear(double delta, BoundThreshold t, LogBase base = LogBase::natural());

/// Slope log(2 - 2t) of the linear bound.
double linear_slope(BoundThreshold t, LogBase base = LogBase::natural());
/// Intercept t (log(1-t) + log t + 2 log 2) of the linear bound. Requires t > 0.
double linear_intercept(BoundThreshold t, LogBase base = LogBase::natural());

enum class BoundKind { UnconstrainedG, RefinedH, Linear };

std::string_view to_string(BoundKind kind);

struct BoundPoint {
  double delta;
  double value;
};

struct BoundCurve {
  BoundKind kind;
  double t;
  LogBase base;
  std::vector<BoundPoint> points;
};

/// Evaluates a bound on the uniform grid of `grid_size` points over [0, 1].
BoundCurve sample_curve(BoundKind kind, BoundThreshold t, std::size_t grid_size,
                        LogBase base = LogBase::natural());

/// Rows "delta,value,kind,t,log_base" with 17 significant digits; header
/// included only when requested.
std::string bound_curve_csv(const BoundCurve& curve, bool with_header = true);

}  // namespace errbound
