#pragma once

#include <stdexcept>
#include <string>

namespace offload {

enum class ErrorCode {
  kInvalidArgument,
  kInvalidProfile,
  kNotAnOffloader,
  kInconsistentQuery,
  kWrongModel,
  kInstanceTooLarge,
  kConfigError,
  kContractViolation,
};

const char* to_string(ErrorCode code);

// Single exception type for the library; callers switch on code().
class OffloadError : public std::runtime_error {
 public:
  OffloadError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace offload
