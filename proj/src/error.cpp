#include "hhga/error.hpp"

#include <cstdio>

namespace hhga {

namespace {

std::string describe_parse_error(std::size_t offset, const std::vector<std::string>& expected,
                                 const std::string& found) {
  std::string msg = "syntax error at offset " + std::to_string(offset) + ": expected ";
  if (expected.size() > 1) msg += "one of ";
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i > 0) msg += ", ";
    msg += expected[i];
  }
  msg += "; found " + found;
  return msg;
}

}  // namespace

ParseError::ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& found)
    : Error(describe_parse_error(offset, expected, found)), offset_(offset), expected_(std::move(expected)) {}

UnknownIdentifierError::UnknownIdentifierError(std::size_t offset, const std::string& name)
    : ParseError(offset, {"x", "ln", "exp", "sqrt", "abs", "sin", "cos"}, "unknown identifier '" + name + "'"),
      name_(name) {}

NonFiniteIntegrandError::NonFiniteIntegrandError(double abscissa, double value)
    : Error("integrand is not finite at t = " + format_real(abscissa) + " (value " + format_real(value) + ")"),
      abscissa_(abscissa) {}

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

}  // namespace hhga
