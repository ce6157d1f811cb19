#pragma once

#include <stdexcept>
#include <string>

namespace scig {

/// Broad failure categories. The CLI maps these onto exit codes.
enum class ErrorKind {
  invalid_input,
  invalid_config,
  window_too_large,
  missing_value,
  numerical_failure,
  search_failure,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid_input";
    case ErrorKind::invalid_config: return "invalid_config";
    case ErrorKind::window_too_large: return "window_too_large";
    case ErrorKind::missing_value: return "missing_value";
    case ErrorKind::numerical_failure: return "numerical_failure";
    case ErrorKind::search_failure: return "search_failure";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

}  // namespace scig
