#pragma once

#include <stdexcept>
#include <string>

namespace ubq {

enum class ErrorCode {
  kInvalidArgument,
  kOutOfDomain,
  kPrecondition,
  kNotInSupport,
  kInsufficientFamily,
  kEmptyInput,
  kParse,
  kIo,
};

const char* to_string(ErrorCode code);

// All library failures are reported through this type; the code lets callers
// (and tests) tell a violated precondition apart from a malformed input.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ubq
