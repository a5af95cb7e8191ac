#pragma once

#include <stdexcept>
#include <string>

namespace mtdd {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// malformed input text: grammar, DIMACS, machine or DFA files
struct ParseError : Error {
  using Error::Error;
};

// structurally broken grammars and violated operation preconditions
struct ValidateError : Error {
  using Error::Error;
};

// work refused because it exceeds a configured cap (rule limit, dense cap)
struct CapError : Error {
  using Error::Error;
};

}  // namespace mtdd
