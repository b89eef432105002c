#pragma once

#include <stdexcept>
#include <string>

namespace mslab {

// Raised for contract violations: mismatched dimensions, malformed tables,
// inputs outside an operation's domain.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Raised when an input document cannot be parsed or does not match its schema.
class ParseError : public Error {
public:
  using Error::Error;
};

} // namespace mslab
