#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace semiquant {

enum class ErrorCode {
  BadParams,
  BadInput,
  UnknownFamily,
  NoWell,
  BranchEscape,
  NonMonotoneX,
  MultiWell,
  TooFewSamples,
  NoTurningPoint,
  EdgeEnergy,
  QuadratureNonConvergence,
  StencilOutOfRange,
  SeriesDiverges,
  DegenerateDenominator,
  BadCount,
  NoSuchLevel,
  NonMonotoneCondition,
  BadRatio,
  TailNonConvergent,
  NoRealRoot,
  NonConvergence,
  DomainTooSmall,
  NotConverged,
  NoClosedForm,
  BracketNotFound,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace semiquant
