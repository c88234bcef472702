#include "fsm/error.hpp"

namespace fsm {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidMatrix: return "InvalidMatrix";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::SingularShift: return "SingularShift";
    case ErrorCode::InvalidProblem: return "InvalidProblem";
    case ErrorCode::ResolventSingular: return "ResolventSingular";
    case ErrorCode::LeftTrustRegion: return "LeftTrustRegion";
    case ErrorCode::InvalidCertificate: return "InvalidCertificate";
    case ErrorCode::InvalidQuantumNumber: return "InvalidQuantumNumber";
    case ErrorCode::InvalidDegree: return "InvalidDegree";
    case ErrorCode::InvalidOrder: return "InvalidOrder";
    case ErrorCode::InvalidOrbital: return "InvalidOrbital";
    case ErrorCode::InvalidSphereRule: return "InvalidSphereRule";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::NonFiniteIntegrand: return "NonFiniteIntegrand";
  }
  return "Unknown";
}

}  // namespace fsm
