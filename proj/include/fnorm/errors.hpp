#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace fnorm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (Matrix Market files, CLI tokens, CSV).
class ParseError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A function argument (usually an eigenvalue) lies on or too close to the
/// excluded set of a branch-cut function.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, std::complex<double> value)
      : Error(what), value_(value) {}
  std::complex<double> value() const noexcept { return value_; }

 private:
  std::complex<double> value_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::size_t index)
      : Error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

}  // namespace fnorm
