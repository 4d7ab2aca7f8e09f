#include "offload/error.hpp"

namespace offload {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kInvalidProfile: return "invalid-profile";
    case ErrorCode::kNotAnOffloader: return "not-an-offloader";
    case ErrorCode::kInconsistentQuery: return "inconsistent-query";
    case ErrorCode::kWrongModel: return "wrong-model";
    case ErrorCode::kInstanceTooLarge: return "instance-too-large";
    case ErrorCode::kConfigError: return "config-error";
    case ErrorCode::kContractViolation: return "contract-violation";
  }
  return "unknown";
}

}  // namespace offload
