#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lingstat {

// Raised for malformed or incomplete configuration (mapping files, run configs).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised for a bad input row. Carries the 1-based line number in the source file.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Raised when a statistic is undefined for the given data (e.g. constant input).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lingstat
