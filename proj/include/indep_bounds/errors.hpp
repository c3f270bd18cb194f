#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace indep_bounds {

enum class ErrorCode {
  InvalidProfile,
  InvalidTable,
  TooLarge,
  DegenerateD,
  ConstraintUnmet,
  ConditionsUnmet,
  EmptyRange,
  NoValidR,
  EmptyRegion,
  Infeasible,
};

inline std::string_view to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidProfile: return "InvalidProfile";
    case ErrorCode::InvalidTable: return "InvalidTable";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::DegenerateD: return "DegenerateD";
    case ErrorCode::ConstraintUnmet: return "ConstraintUnmet";
    case ErrorCode::ConditionsUnmet: return "ConditionsUnmet";
    case ErrorCode::EmptyRange: return "EmptyRange";
    case ErrorCode::NoValidR: return "NoValidR";
    case ErrorCode::EmptyRegion: return "EmptyRegion";
    case ErrorCode::Infeasible: return "Infeasible";
  }
  return "Unknown";
}

class BoundsError : public std::runtime_error {
 public:
  BoundsError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace indep_bounds
