#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fsm {

enum class ErrorCode {
  InvalidArgument,
  InvalidMatrix,
  NoConvergence,
  NotPositiveDefinite,
  SingularShift,
  InvalidProblem,
  ResolventSingular,
  LeftTrustRegion,
  InvalidCertificate,
  InvalidQuantumNumber,
  InvalidDegree,
  InvalidOrder,
  InvalidOrbital,
  InvalidSphereRule,
  IoError,
  NonFiniteIntegrand,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fsm
