#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace svdd {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Bad caller input: dimension mismatch, empty data, out-of-range argument.
class InputError : public Error {
public:
  using Error::Error;
};

// Malformed cell or row in an input file; carries the 1-based line number.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what), line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

// Structural problem with a file (wrong header, column count, version).
class FormatError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

// Data admits no meaningful answer (zero variance, nonpositive maximum).
class DegenerateDataError : public Error {
public:
  using Error::Error;
};

class InvalidToleranceError : public Error {
public:
  using Error::Error;
};

// Iterative procedure ran out of budget; carries the best iterate's state.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, std::uint64_t iterations,
                   double residual, double objective)
      : Error(what),
        iterations_(iterations),
        residual_(residual),
        objective_(objective) {}

  std::uint64_t iterations() const { return iterations_; }
  double residual() const { return residual_; }
  double objective() const { return objective_; }

private:
  std::uint64_t iterations_;
  double residual_;
  double objective_;
};

}  // namespace svdd
