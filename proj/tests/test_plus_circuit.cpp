#include "doctest.h"
#include "mtdd/grammar.hpp"
#include "mtdd/plus_circuit.hpp"

using namespace mtdd;

namespace {

// chain of n doublings: value 2^n with n+1 variables
Grammar doublingChain(int n, Semiring ring) {
  Grammar g(ring, Dim::Matrix);
  Var v = g.addRule("c0", Rule::constant(1));
  for (int i = 1; i <= n; ++i) v = g.addRule("c" + std::to_string(i), Rule::add(v, v));
  g.setStart(v);
  g.validate();
  return g;
}

}  // namespace

TEST_SUITE_BEGIN("plus_circuit");

TEST_CASE("doubling chain evaluates to 2^n with one visit per variable") {
  Grammar g = doublingChain(64, Semiring::integers());
  EvalStats st;
  Int v = evalCircuit(g, g.start(), &st);
  CHECK(v == Int("18446744073709551616"));
  CHECK(st.visited == 65);  // sharing, not expansion
}

TEST_CASE("modular chain reduces along the way") {
  Grammar g = doublingChain(64, Semiring::modular(5));
  CHECK(evalCircuit(g, g.start()) == Int(1));  // 2^64 = 16^16 = 1 mod 5
}

TEST_CASE("diamond sharing counts each node once") {
  Grammar g(Semiring::integers(), Dim::Matrix);
  Var a = g.addRule("a", Rule::constant(3));
  Var b = g.addRule("b", Rule::add(a, a));
  Var c = g.addRule("c", Rule::add(b, a));
  Var d = g.addRule("d", Rule::add(c, b));
  g.setStart(d);
  g.validate();
  EvalStats st;
  CHECK(evalCircuit(g, d, &st) == Int(15));
  CHECK(st.visited == 4);
  CHECK(isPlusCircuit(g, d));
}

TEST_CASE("block rules disqualify a circuit") {
  Grammar g(Semiring::integers(), Dim::Matrix);
  Var a = g.addRule("a", Rule::constant(1));
  Var q = g.addRule("q", Rule::quad(a, a, a, a));
  g.setStart(q);
  g.validate();
  CHECK_FALSE(isPlusCircuit(g, q));
  CHECK(isPlusCircuit(g, a));
  CHECK_THROWS_AS(evalCircuit(g, q), ValidateError);
}

TEST_SUITE_END();
