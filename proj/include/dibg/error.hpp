#pragma once

#include <stdexcept>
#include <string>

namespace dibg {

// Stable error codes. The hundreds digit is the category used on the wire:
// 1xx mode, 2xx lookup, 3xx parse/check, 4xx argument, 5xx document/io.
enum class ErrorCode : int {
  WrongMode = 101,

  UnknownProgram = 201,
  UnknownConditional = 202,
  UnknownWatch = 203,

  Parse = 301,
  Compile = 302,
  NonBooleanCondition = 303,
  InputArity = 304,

  InvalidArgument = 401,
  LastProgram = 402,
  TooManyPrograms = 403,

  Document = 501,
  Io = 502,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dibg
