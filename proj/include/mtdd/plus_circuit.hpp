#pragma once

#include "mtdd/grammar.hpp"

namespace mtdd {

struct EvalStats {
  std::size_t visited = 0;
};

// true iff every variable reachable from v has an Add or Const rule
bool isPlusCircuit(const Grammar& g, Var v);

// exact bottom-up evaluation, each reachable variable visited once
Int evalCircuit(const Grammar& g, Var v, EvalStats* stats = nullptr);

}  // namespace mtdd
