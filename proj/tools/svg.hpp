#pragma once

#include <span>
#include <string>

#include "errbound/bounds.hpp"
#include "errbound/simulation.hpp"

namespace errbound::cli {

/// Static plot of bound curves with an optional scatter layer. Infinite KL
/// points are drawn at the top edge.
std::string render_svg(std::span<const BoundCurve> curves,
                       std::span<const SimulationRecord> points, const std::string& preamble);

}  // namespace errbound::cli
