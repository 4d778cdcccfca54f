#include "freehardy/error.hpp"

namespace freehardy {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::Capacity: return "capacity";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::NotInvertible: return "not-invertible";
    case ErrorKind::NotSchur: return "not-schur";
    case ErrorKind::InvalidMoments: return "invalid-moments";
    case ErrorKind::Inconsistency: return "inconsistency";
    case ErrorKind::NumericalSingularity: return "numerical-singularity";
    case ErrorKind::CeObstruction: return "ce-obstruction";
  }
  return "unknown";
}

static std::string decorate(ErrorKind kind, const std::string& message, long position) {
  std::string s = std::string(to_string(kind)) + ": " + message;
  if (position >= 0) s += " (at position " + std::to_string(position) + ")";
  return s;
}

Error::Error(ErrorKind kind, const std::string& message, long position)
    : std::runtime_error(decorate(kind, message, position)), kind_(kind), position_(position) {}

}  // namespace freehardy
