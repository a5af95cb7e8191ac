#pragma once

#include "mtdd/grammar.hpp"

namespace mtdd {

inline constexpr std::size_t kDefaultRuleLimit = 10'000'000;

// exact matrix product; output size stays within 5 * vars(g1) * vars(g2)
Grammar multiply(const Grammar& g1, Var a1, const Grammar& g2, Var a2,
                 std::size_t ruleLimit = kDefaultRuleLimit);

// pointwise sum of two equal-height values
Grammar addTop(const Grammar& g1, Var a1, const Grammar& g2, Var a2);

// fresh copy of the reachable part with every block's tr/bl swapped
Grammar transposeG(const Grammar& g, Var a);

struct CircuitResult {
  Grammar circuit;
  Int value;
};

// single entry, 1-based indices; dimension 2
CircuitResult entryOf(const Grammar& g, Var a, const Int& i, const Int& j);
// single entry of a dimension-1 value
CircuitResult entryOf(const Grammar& g, Var a, const Int& i);

enum class Aggregate { Trace, Sum };
CircuitResult aggregate(const Grammar& g, Var a, Aggregate kind);

// Kronecker product; heights add
Grammar tensorG(const Grammar& g1, Var a1, const Grammar& g2, Var a2,
                std::size_t ruleLimit = kDefaultRuleLimit);

// entrywise product of two equal-height values
Grammar hadamardG(const Grammar& g1, Var a1, const Grammar& g2, Var a2,
                  std::size_t ruleLimit = kDefaultRuleLimit);

// left-to-right iterated product; n = 0 yields the identity of the same height
Grammar powerG(const Grammar& g, Var a, unsigned n,
               std::size_t ruleLimit = kDefaultRuleLimit);

}  // namespace mtdd
