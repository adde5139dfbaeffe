#pragma once

#include <stdexcept>
#include <string>

namespace catmouse {

// Argument outside the mathematical domain of an operation (a <= 0, dt <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Invalid configuration value or combination.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Sensor geometry cannot support the requested measurement.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text; carries the 1-based line number when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

// Weight file or wire message that violates the documented format.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operation invoked in the wrong session/episode state.
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace catmouse
