#pragma once

#include <stdexcept>
#include <string>

namespace membrane {

enum class ErrorCode {
  EmptyInput,
  InvalidArgument,
  InvalidRate,
  TooCoarse,
  ParseError,
  BadOrigin,
  DegenerateLifting,
  InternalInconsistency,
  TooLarge,
  MissingLayer,
};

const char* to_string(ErrorCode code);

// Every library failure is reported through this type; `code()` identifies
// the contract that was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace membrane
