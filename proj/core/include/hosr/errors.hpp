#pragma once

#include <stdexcept>
#include <string>

namespace hosr {

// Invalid-argument failures use std::invalid_argument directly. The types
// below cover the remaining error kinds so callers can branch on them.

/// Models or other state required by an operation are missing or stale.
class InvalidStateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// No constraint-respecting merge exists and relaxation is disabled.
class ConstraintDeadlockError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. `line` is 1-based, 0 when not applicable.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string path, std::size_t line, const std::string& what);

  const std::string& path() const noexcept { return path_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string path_;
  std::size_t line_;
};

/// Structurally invalid or version-mismatched JSON document.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hosr
