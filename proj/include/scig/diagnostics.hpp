#pragma once

#include <functional>
#include <mutex>
#include <string>
#include <utility>

namespace scig {

// Non-fatal numerical warnings. The library is silent unless a handler is installed.
using WarningHandler = std::function<void(const std::string&)>;

namespace detail {
struct WarningRegistry {
  std::mutex mutex;
  WarningHandler handler;
};
inline WarningRegistry& warning_registry() {
  static WarningRegistry registry;
  return registry;
}
}  // namespace detail

/// Installs `handler` and returns the previous one.
inline WarningHandler set_warning_handler(WarningHandler handler) {
  auto& reg = detail::warning_registry();
  std::lock_guard lock(reg.mutex);
  return std::exchange(reg.handler, std::move(handler));
}

inline void warn(const std::string& message) {
  auto& reg = detail::warning_registry();
  std::lock_guard lock(reg.mutex);
  if (reg.handler) reg.handler(message);
}

}  // namespace scig
