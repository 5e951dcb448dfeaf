#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace zariski {

enum class ErrorCode {
  usage,               // bad argument / mismatched groups / out-of-range index
  parse,               // malformed group file, type string, number
  capacity,            // configured cap exceeded (automorphism enumeration)
  budget,              // search budget exhausted
  not_generating,
  product_not_identity,
  not_disjoint,
  genus_not_integral,
  genus_below_two,
  too_few_branch_points,
  invalid_chern_input,
  non_admissible_degree,
  threshold_undefined,
  constraint,          // parameter constraint violation (e.g. l <= 2k)
  internal,            // cross-check failure; indicates a bug
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::usage: return "usage";
    case ErrorCode::parse: return "parse";
    case ErrorCode::capacity: return "capacity";
    case ErrorCode::budget: return "budget";
    case ErrorCode::not_generating: return "not-generating";
    case ErrorCode::product_not_identity: return "product-not-identity";
    case ErrorCode::not_disjoint: return "not-disjoint";
    case ErrorCode::genus_not_integral: return "genus-not-integral";
    case ErrorCode::genus_below_two: return "genus-below-two";
    case ErrorCode::too_few_branch_points: return "too-few-branch-points";
    case ErrorCode::invalid_chern_input: return "invalid-chern-input";
    case ErrorCode::non_admissible_degree: return "non-admissible-degree";
    case ErrorCode::threshold_undefined: return "threshold-undefined";
    case ErrorCode::constraint: return "constraint";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace zariski
