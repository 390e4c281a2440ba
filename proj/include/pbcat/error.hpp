// Error type shared by the whole library.  Every precondition violation or
// construction failure is reported as an Error carrying a machine-readable
// kind plus a human-readable message; the C API maps kinds onto exit codes.
#pragma once

#include <stdexcept>
#include <string>

namespace pbcat {

enum class ErrorKind {
  invalid_input,     // malformed documents, bad arguments, precondition failures
  negative_result,   // well-formed input for which the requested object does not exist
  internal,          // invariant breakage inside the library itself
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail_invalid(const std::string& message) {
  throw Error(ErrorKind::invalid_input, message);
}

[[noreturn]] inline void fail_negative(const std::string& message) {
  throw Error(ErrorKind::negative_result, message);
}

[[noreturn]] inline void fail_internal(const std::string& message) {
  throw Error(ErrorKind::internal, message);
}

}  // namespace pbcat
