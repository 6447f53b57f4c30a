#include "trigene/error.hpp"

namespace trigene {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NonPositiveDelta: return "NonPositiveDelta";
    case Errc::AlreadyRescaled: return "AlreadyRescaled";
    case Errc::NotRescaled: return "NotRescaled";
    case Errc::NegativeDiscriminant: return "NegativeDiscriminant";
    case Errc::DegenerateOccupancy: return "DegenerateOccupancy";
    case Errc::DomainError: return "DomainError";
    case Errc::PoleInDenominator: return "PoleInDenominator";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::BranchUndefined: return "BranchUndefined";
    case Errc::DegenerateParameters: return "DegenerateParameters";
    case Errc::EvaluationFailure: return "EvaluationFailure";
    case Errc::NegativeProbability: return "NegativeProbability";
    case Errc::TruncationFailure: return "TruncationFailure";
    case Errc::SimulationRunaway: return "SimulationRunaway";
    case Errc::SingularSystem: return "SingularSystem";
  }
  return "Unknown";
}

bool is_validation_error(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument:
    case Errc::NonPositiveDelta:
    case Errc::AlreadyRescaled:
    case Errc::NotRescaled:
    case Errc::DomainError:
    case Errc::PoleInDenominator:
      return true;
    default:
      return false;
  }
}

}  // namespace trigene
