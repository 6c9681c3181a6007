#include "errbound/error.hpp"

namespace errbound {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NegativeMass: return "NegativeMass";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::BadShape: return "BadShape";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::ZeroMassObservation: return "ZeroMassObservation";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::SamplerExhausted: return "SamplerExhausted";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::EmptySample: return "EmptySample";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace errbound
