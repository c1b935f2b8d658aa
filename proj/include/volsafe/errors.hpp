#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace volsafe {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument or parameter block does not hold.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A configuration value is missing or malformed. `path()` names the
/// offending field, e.g. "bounds.dt".
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& what)
      : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Malformed text input. `line()` is 1-based; 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A state leaves the admissible domain while running in strict mode.
class BoundViolationError : public Error {
 public:
  using Error::Error;
};

/// A geometric computation cannot be carried out: empty or unbounded
/// polytope, inconsistent equalities, dimension or size guard exceeded.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace volsafe
