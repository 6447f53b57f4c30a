#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace trigene {

enum class Errc {
  InvalidArgument,
  NonPositiveDelta,
  AlreadyRescaled,
  NotRescaled,
  NegativeDiscriminant,
  DegenerateOccupancy,
  DomainError,
  PoleInDenominator,
  NoConvergence,
  BranchUndefined,
  DegenerateParameters,
  EvaluationFailure,
  NegativeProbability,
  TruncationFailure,
  SimulationRunaway,
  SingularSystem,
};

std::string_view to_string(Errc code) noexcept;

/// True for errors caused by bad user input rather than numerical breakdown.
bool is_validation_error(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace trigene
