#include "ubq/error.hpp"

namespace ubq {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kOutOfDomain: return "out_of_domain";
    case ErrorCode::kPrecondition: return "precondition";
    case ErrorCode::kNotInSupport: return "not_in_support";
    case ErrorCode::kInsufficientFamily: return "insufficient_family";
    case ErrorCode::kEmptyInput: return "empty_input";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

}  // namespace ubq
