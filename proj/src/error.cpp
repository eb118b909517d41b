#include "semiquant/error.hpp"

namespace semiquant {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::BadInput: return "BadInput";
    case ErrorCode::UnknownFamily: return "UnknownFamily";
    case ErrorCode::NoWell: return "NoWell";
    case ErrorCode::BranchEscape: return "BranchEscape";
    case ErrorCode::NonMonotoneX: return "NonMonotoneX";
    case ErrorCode::MultiWell: return "MultiWell";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::NoTurningPoint: return "NoTurningPoint";
    case ErrorCode::EdgeEnergy: return "EdgeEnergy";
    case ErrorCode::QuadratureNonConvergence: return "QuadratureNonConvergence";
    case ErrorCode::StencilOutOfRange: return "StencilOutOfRange";
    case ErrorCode::SeriesDiverges: return "SeriesDiverges";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::BadCount: return "BadCount";
    case ErrorCode::NoSuchLevel: return "NoSuchLevel";
    case ErrorCode::NonMonotoneCondition: return "NonMonotoneCondition";
    case ErrorCode::BadRatio: return "BadRatio";
    case ErrorCode::TailNonConvergent: return "TailNonConvergent";
    case ErrorCode::NoRealRoot: return "NoRealRoot";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::DomainTooSmall: return "DomainTooSmall";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::NoClosedForm: return "NoClosedForm";
    case ErrorCode::BracketNotFound: return "BracketNotFound";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace semiquant
