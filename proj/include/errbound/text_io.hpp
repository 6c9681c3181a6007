#pragma once

#include <iosfwd>
#include <string>

#include "errbound/distributions.hpp"
#include "errbound/sequences.hpp"

namespace errbound {

/// Shortest decimal that round-trips to the same double; "inf"/"-inf"/"nan"
/// for non-finite values.
std::string format_shortest(double value);
/// printf("%.17g") with the same non-finite spellings.
std::string format_sig17(double value);

/// "C X" header followed by C rows of X space-separated probabilities.
void write_distribution(std::ostream& out, const JointDistribution& d);
std::string distribution_text(const JointDistribution& d);
/// Throws ParseError on malformed text, and validation errors on bad mass.
JointDistribution read_distribution(std::istream& in);

/// Header "N C X t", the pr table (C^N rows x X columns, lexicographic class
/// sequences), then either the model joint table, "CONDITIONAL" and a table of
/// q(c_1^N | X), or "PRIOR" and C^N prior masses.
void write_sequence_task(std::ostream& out, const SequenceTask& task);
SequenceTask read_sequence_task(std::istream& in);

}  // namespace errbound
