#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hhga {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& found);

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

/// An identifier that is neither `x` nor a known function.
class UnknownIdentifierError : public ParseError {
 public:
  UnknownIdentifierError(std::size_t offset, const std::string& name);

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// A function or operator applied outside its mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Parameters rejected before any evaluation takes place.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The quadrature engine sampled a NaN or infinity.
class NonFiniteIntegrandError : public Error {
 public:
  NonFiniteIntegrandError(double abscissa, double value);

  double abscissa() const noexcept { return abscissa_; }

 private:
  double abscissa_;
};

/// Formats with 17 significant digits, which round-trips any double.
std::string format_real(double value);

}  // namespace hhga
