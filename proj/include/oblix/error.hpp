#pragma once

#include <stdexcept>
#include <string>

namespace oblix {

enum class Errc {
  invalid_input,
  ambient_mismatch,
  singular_gram,
  invalid_weight,
  invalid_parameter,
  degenerate_angle,
  precondition_failed,
  too_large,
  not_full_rank,
  numerical_underflow,
  not_a_frame,
  parse_error,
};

inline const char* to_string(Errc code) {
  switch (code) {
    case Errc::invalid_input: return "InvalidInput";
    case Errc::ambient_mismatch: return "AmbientMismatch";
    case Errc::singular_gram: return "SingularGram";
    case Errc::invalid_weight: return "InvalidWeight";
    case Errc::invalid_parameter: return "InvalidParameter";
    case Errc::degenerate_angle: return "DegenerateAngle";
    case Errc::precondition_failed: return "PreconditionFailed";
    case Errc::too_large: return "TooLarge";
    case Errc::not_full_rank: return "NotFullRank";
    case Errc::numerical_underflow: return "NumericalUnderflow";
    case Errc::not_a_frame: return "NotAFrame";
    case Errc::parse_error: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  Errc code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

}  // namespace oblix
