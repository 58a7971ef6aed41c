#include "pdmp/state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pdmp/errors.hpp"

namespace pdmp {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::HorizonExceeded: return "HorizonExceeded";
    case ErrorCode::CemeteryInput: return "CemeteryInput";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::InversionFailure: return "InversionFailure";
    case ErrorCode::UnsupportedState: return "UnsupportedState";
    case ErrorCode::MissingOracle: return "MissingOracle";
    case ErrorCode::DegenerateJump: return "DegenerateJump";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::MissingEnvelope: return "MissingEnvelope";
    case ErrorCode::ZeroQh: return "ZeroQh";
    case ErrorCode::BadStochasticMatrix: return "BadStochasticMatrix";
    case ErrorCode::BadParameters: return "BadParameters";
    case ErrorCode::StiffnessFailure: return "StiffnessFailure";
    case ErrorCode::AllExploded: return "AllExploded";
    case ErrorCode::BadConfig: return "BadConfig";
  }
  return "Unknown";
}

double state_distance(const State& a, const State& b) {
  if (a.tag != b.tag || a.label != b.label || a.coords.size() != b.coords.size())
    return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (std::size_t i = 0; i < a.coords.size(); ++i)
    d = std::max(d, std::abs(a.coords[i] - b.coords[i]));
  return d;
}

std::ostream& operator<<(std::ostream& os, const State& s) {
  switch (s.tag) {
    case StateTag::interior: os << "E"; break;
    case StateTag::boundary: os << "dE"; break;
    case StateTag::cemetery: return os << "cemetery";
  }
  os << "(";
  for (std::size_t i = 0; i < s.coords.size(); ++i) os << (i ? ", " : "") << s.coords[i];
  os << ")";
  if (s.label) os << "#" << *s.label;
  return os;
}

}  // namespace pdmp
