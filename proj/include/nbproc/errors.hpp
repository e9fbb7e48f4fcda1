#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nbproc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameter outside the support of a distribution or operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Request exceeds a precomputed table (e.g. the Stirling triangle).
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. `line()` is 1-based; 0 when the error is not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class CorpusError : public Error {
 public:
  using Error::Error;
};

/// A Gibbs update produced a non-finite value. `variable()` names the offender.
class IterationError : public Error {
 public:
  explicit IterationError(const std::string& variable)
      : Error("non-finite value in update of " + variable), variable_(variable) {}
  const std::string& variable() const noexcept { return variable_; }

 private:
  std::string variable_;
};

class EvaluationError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace nbproc
