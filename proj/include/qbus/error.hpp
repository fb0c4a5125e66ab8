#pragma once

#include <stdexcept>
#include <string>

namespace qbus {

enum class ErrorCode {
  IndexOutOfRange,
  NonPhysicalInput,
  NegativeDiscriminant,
  SingularCM,
  NonPositiveDeterminant,
  InvalidAttachment,
  DegenerateChi,
  StepSizeUnderflow,
  DimensionMismatch,
  EmptyWindow,
  ConfigError,
  IntegrationFailure,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qbus
