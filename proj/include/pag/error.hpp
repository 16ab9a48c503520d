#pragma once

#include <stdexcept>
#include <string>

namespace pag {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or invalid input: files, labels, value constraints.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Violated operation preconditions and exhausted guards (caps, empty
// equilibrium sets, environment mismatches).
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace pag
