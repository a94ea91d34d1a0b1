#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dcm {

enum class ErrorCode {
  InvalidInput,
  SingularMatrix,
  ComplexSpectrum,
  RankDeficient,
  SchemaError,
  UndefinedMetric,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above; the
/// CLI prints the code so scripts can branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, const std::string& message) {
  if (!condition) fail(ErrorCode::InvalidInput, message);
}

}  // namespace dcm
