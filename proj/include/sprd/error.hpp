#pragma once

#include <stdexcept>
#include <string>

namespace sprd {

enum class ErrorCode {
  InvalidArgument = 1,
  NonFinite = 2,
  GridMismatch = 3,
  Config = 4,
  Io = 5,
};

/// Exception carried through the C++ core. The C API translates the code
/// into its integer status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, const std::string& what,
                    ErrorCode code = ErrorCode::InvalidArgument) {
  if (!cond) fail(code, what);
}

}  // namespace sprd
