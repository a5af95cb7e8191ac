#pragma once

#include "mtdd/grammar.hpp"

namespace mtdd {

struct EqualityStats {
  std::size_t maxEquations = 0;   // peak system size
  std::size_t maxVars = 0;        // peak distinct variables in the system
  std::size_t reductions = 0;     // linear-algebra reduction rounds
  Int maxAbsCoeff = 0;            // largest coefficient magnitude seen
};

// val(a1) == val(a2), decided by height descent without densifying
bool equalVals(const Grammar& g, Var a1, Var a2, EqualityStats* stats = nullptr);

// same decision across two grammars (merged first)
bool equalAcross(const Grammar& g1, Var a1, const Grammar& g2, Var a2,
                 EqualityStats* stats = nullptr);

// val(a) is the all-zero matrix or vector
bool isZero(const Grammar& g, Var a, EqualityStats* stats = nullptr);

}  // namespace mtdd
