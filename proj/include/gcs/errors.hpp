#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gcs {

/// Bad argument to a pure function (theta < 1, negative time, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Scenario or stream configuration that cannot be honoured.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scenario text that is not valid JSON or does not match the schema.
/// Line and column are 1-based; 0 when the problem has no single position.
class ParseError : public ConfigError {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : ConfigError(what), line_(line), column_(column) {}
  [[nodiscard]] std::size_t line() const { return line_; }
  [[nodiscard]] std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Caller broke a usage contract (stale estimate, out-of-order boundary).
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Engine-side invariant breach; indicates a bug rather than bad input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace gcs
