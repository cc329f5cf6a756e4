#pragma once

#include <stdexcept>
#include <string>

namespace opinion_merge {

enum class ErrorCode {
  dimension_mismatch,
  malformed_distribution,
  invalid_parameter,
  invalid_bet,
  invalid_exceptional,
  invalid_xi,
  nonfinite_capital,
  weight_sum,
  not_timid,
  generation_failed,
  parse_error,
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::dimension_mismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::malformed_distribution: return "MALFORMED_DISTRIBUTION";
    case ErrorCode::invalid_parameter: return "INVALID_PARAMETER";
    case ErrorCode::invalid_bet: return "INVALID_BET";
    case ErrorCode::invalid_exceptional: return "INVALID_EXCEPTIONAL";
    case ErrorCode::invalid_xi: return "INVALID_XI";
    case ErrorCode::nonfinite_capital: return "NONFINITE_CAPITAL";
    case ErrorCode::weight_sum: return "WEIGHT_SUM";
    case ErrorCode::not_timid: return "NOT_TIMID";
    case ErrorCode::generation_failed: return "GENERATION_FAILED";
    case ErrorCode::parse_error: return "PARSE_ERROR";
  }
  return "UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace opinion_merge
