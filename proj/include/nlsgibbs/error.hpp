#pragma once

#include <stdexcept>
#include <string>

namespace nlsgibbs {

/// Precondition violation on a public entry point.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure did not reach its stopping criterion.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rejection initialisation of a chain ran out of attempts.
class ChainInitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad or missing configuration entry; `key()` carries the offending key path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

namespace detail {
inline void require(bool condition, const char* message) {
  if (!condition) throw InvalidArgument(message);
}
}  // namespace detail

}  // namespace nlsgibbs
