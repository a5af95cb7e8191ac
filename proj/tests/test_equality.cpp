#include "doctest.h"
#include "mtdd/equality.hpp"
#include "mtdd/grammar.hpp"
#include "mtdd/matrix_ops.hpp"
#include "support/test_util.hpp"

using namespace mtdd;
namespace tt = mtdd::test;

namespace {

// copy with every terminal negated; over Z the sum with the original is zero
Grammar negated(const Grammar& g) {
  Grammar out(g.ring(), g.dim());
  for (Var v = 0; v < g.varCount(); ++v) out.declare(g.nameOf(v));
  for (Var v = 0; v < g.varCount(); ++v) {
    Rule r = g.rule(v);
    if (r.kind == RuleKind::Const) r.value = g.ring().neg(r.value);
    out.addRule(g.nameOf(v), std::move(r));
  }
  out.setStart(g.start());
  out.validate();
  return out;
}

Grammar zeroGrammar(int height, Dim dim, const Semiring& ring) {
  Grammar g(ring, dim);
  Var z = g.addRule("z0", Rule::constant(0));
  for (int j = 1; j <= height; ++j)
    z = g.addRule("z" + std::to_string(j), dim == Dim::Matrix ? Rule::quad(z, z, z, z)
                                                              : Rule::pair(z, z));
  g.setStart(z);
  g.validate();
  return g;
}

}  // namespace

TEST_SUITE_BEGIN("equality");

TEST_CASE("decision matches the dense oracle on random pairs") {
  tt::Rng rng(24601);
  int equalSeen = 0, unequalSeen = 0;
  for (int rep = 0; rep < 40; ++rep) {
    tt::RandomGrammarOptions opt;
    opt.height = 1 + static_cast<int>(rng() % 3);
    opt.dim = rep % 3 == 0 ? Dim::Vector : Dim::Matrix;
    opt.constMag = 2;  // small terminals make accidental equality possible
    Semiring ring = rep % 2 ? Semiring::modular(4) : Semiring::integers();
    Grammar g1 = tt::randomGrammar(rng, ring, opt);
    Grammar g2 = tt::randomGrammar(rng, ring, opt);
    const bool expected = tt::denseOf(g1) == tt::denseOf(g2);
    CHECK(equalAcross(g1, g1.start(), g2, g2.start()) == expected);
    (expected ? equalSeen : unequalSeen)++;
  }
  CHECK(unequalSeen > 0);
}

TEST_CASE("value-preserving rewrites stay equal, terminal mutations do not") {
  tt::Rng rng(1887);
  for (int rep = 0; rep < 25; ++rep) {
    tt::RandomGrammarOptions opt;
    opt.height = 1 + static_cast<int>(rng() % 4);
    opt.dim = rep % 4 == 0 ? Dim::Vector : Dim::Matrix;
    Semiring ring = rep % 3 == 0 ? Semiring::modular(6) : Semiring::integers();
    Grammar g = tt::randomGrammar(rng, ring, opt);
    Grammar same = tt::rewriteEqual(rng, g);
    CHECK(equalAcross(g, g.start(), same, same.start()));
    Grammar diff = tt::mutateConst(rng, g);
    CHECK_FALSE(equalAcross(g, g.start(), diff, diff.start()));
  }
}

TEST_CASE("within one grammar the decision follows the unfoldings") {
  Grammar g = parseGrammar(
      "semiring Z\n"
      "start S\n"
      "a -> 2\n"
      "b -> 1\n"
      "c -> b + b\n"
      "A -> [a c ; b a]\n"
      "B -> [c a ; a b]\n"
      "S -> A + B\n");
  CHECK(equalVals(g, g.var("a"), g.var("c")));
  CHECK_FALSE(equalVals(g, g.var("a"), g.var("b")));
  CHECK_FALSE(equalVals(g, g.var("A"), g.var("B")));
  CHECK(equalVals(g, g.var("A"), g.var("A")));
}

TEST_CASE("zero detection") {
  for (Dim dim : {Dim::Matrix, Dim::Vector}) {
    Grammar z = zeroGrammar(3, dim, Semiring::integers());
    CHECK(isZero(z, z.start()));
  }
  tt::Rng rng(42);
  for (int rep = 0; rep < 10; ++rep) {
    tt::RandomGrammarOptions opt;
    opt.height = 1 + static_cast<int>(rng() % 3);
    Grammar g = tt::randomGrammar(rng, Semiring::integers(), opt);
    Grammar neg = negated(g);
    Grammar cancel = addTop(g, g.start(), neg, neg.start());
    CHECK(isZero(cancel, cancel.start()));
    DenseMatrix d = tt::denseOf(g);
    CHECK(isZero(g, g.start()) == (d == DenseMatrix(d.rows(), d.cols())));
  }
}

TEST_CASE("modular equality identifies residues") {
  Grammar a = parseGrammar("semiring Zmod 5\nstart S\nc -> 7\nS -> [c c ; c c]\n");
  Grammar b = parseGrammar("semiring Zmod 5\nstart S\nd -> -3\nS -> [d d ; d d]\n");
  CHECK(equalAcross(a, a.start(), b, b.start()));
  // 2 * 4 = 8 = 3 mod 5
  Grammar c = parseGrammar("semiring Zmod 5\nstart S\nx -> 2\ny -> 4\nz -> 0\nS -> [x y ; z x]\n");
  Grammar d = multiply(c, c.start(), c, c.start());
  Grammar e = parseGrammar("semiring Zmod 5\nstart S\nf -> 4\ng -> 1\nz -> 0\nS -> [f g ; z f]\n");
  CHECK(equalAcross(d, d.start(), e, e.start()));
}

TEST_CASE("mismatched operands are rejected rather than unequal") {
  Grammar a = parseGrammar("semiring Z\nstart S\nc -> 1\nS -> [c c ; c c]\n");
  Grammar tall = parseGrammar(
      "semiring Z\nstart S\nc -> 1\nT -> [c c ; c c]\nS -> [T T ; T T]\n");
  CHECK_THROWS_AS(equalAcross(a, a.start(), tall, tall.start()), ValidateError);
  Grammar zm = parseGrammar("semiring Zmod 3\nstart S\nc -> 1\nS -> [c c ; c c]\n");
  CHECK_THROWS_AS(equalAcross(a, a.start(), zm, zm.start()), ValidateError);
  Grammar vec = parseGrammar("semiring Z\ndim 1\nstart S\nc -> 1\nS -> [c c]\n");
  CHECK_THROWS_AS(equalAcross(a, a.start(), vec, vec.start()), ValidateError);
}

TEST_CASE("equality is a congruence for the operations") {
  tt::Rng rng(3141);
  for (int rep = 0; rep < 8; ++rep) {
    tt::RandomGrammarOptions opt;
    opt.height = 2;
    Grammar g = tt::randomGrammar(rng, Semiring::integers(), opt);
    Grammar h = tt::rewriteEqual(rng, g);
    Grammar other = tt::randomGrammar(rng, Semiring::integers(), opt);

    Grammar p1 = multiply(g, g.start(), other, other.start());
    Grammar p2 = multiply(h, h.start(), other, other.start());
    CHECK(equalAcross(p1, p1.start(), p2, p2.start()));

    Grammar t1 = transposeG(g, g.start());
    Grammar t2 = transposeG(h, h.start());
    CHECK(equalAcross(t1, t1.start(), t2, t2.start()));

    Grammar s1 = addTop(g, g.start(), other, other.start());
    Grammar s2 = addTop(h, h.start(), other, other.start());
    CHECK(equalAcross(s1, s1.start(), s2, s2.start()));
  }
}

TEST_CASE("trace of a product commutes") {
  tt::Rng rng(1729);
  for (int rep = 0; rep < 6; ++rep) {
    tt::RandomGrammarOptions opt;
    opt.height = 2;
    Semiring ring = rep % 2 ? Semiring::modular(9) : Semiring::integers();
    Grammar a = tt::randomGrammar(rng, ring, opt);
    Grammar b = tt::randomGrammar(rng, ring, opt);
    Grammar ab = multiply(a, a.start(), b, b.start());
    Grammar ba = multiply(b, b.start(), a, a.start());
    CHECK(aggregate(ab, ab.start(), Aggregate::Trace).value ==
          aggregate(ba, ba.start(), Aggregate::Trace).value);
  }
}

TEST_CASE("equality scales to heights far beyond dense reach") {
  // two builds of the 2^30 x 2^30 identity: plain, and with split halves
  Grammar a(Semiring::integers(), Dim::Matrix);
  {
    Var i = a.addRule("I0", Rule::constant(1));
    Var o = a.addRule("O0", Rule::constant(0));
    for (int j = 1; j <= 30; ++j) {
      Var i2 = a.addRule("I" + std::to_string(j), Rule::quad(i, o, o, i));
      if (j < 30) o = a.addRule("O" + std::to_string(j), Rule::quad(o, o, o, o));
      i = i2;
    }
    a.setStart(i);
    a.validate();
  }
  Grammar b(Semiring::integers(), Dim::Matrix);
  {
    Var h = b.addRule("H0", Rule::constant(1));
    Var u = b.addRule("U0", Rule::constant(-1));
    Var s = b.addRule("S0", Rule::add(h, u));  // 0, spelled 1 + (-1)
    for (int j = 1; j <= 30; ++j) {
      Var h2 = b.addRule("H" + std::to_string(j), Rule::quad(h, s, s, h));
      if (j < 30) s = b.addRule("S" + std::to_string(j), Rule::quad(s, s, s, s));
      h = h2;
    }
    b.setStart(h);
    b.validate();
  }
  EqualityStats st;
  CHECK(equalAcross(a, a.start(), b, b.start(), &st));
  CHECK(st.maxEquations > 0);
  CHECK(st.maxVars > 0);
}

TEST_CASE("coefficients stay within the exponential size bound") {
  tt::Rng rng(60902);
  for (int rep = 0; rep < 10; ++rep) {
    tt::RandomGrammarOptions opt;
    opt.height = 3;
    opt.maxAdds = 4;  // addition-heavy instances grow coefficients fastest
    Grammar g = tt::randomGrammar(rng, Semiring::integers(), opt);
    Grammar h = tt::rewriteEqual(rng, g);
    EqualityStats st;
    equalAcross(g, g.start(), h, h.start(), &st);
    const std::uint64_t bits = grammarSize(g) + grammarSize(h);
    CHECK(magnitudeBits(st.maxAbsCoeff) <= bits);
  }
}

TEST_CASE("reductions kick in once equations outnumber variables") {
  // decomposing {A2 = B2} yields four copies of {A1 = B1} over two variables
  Grammar g = parseGrammar(
      "semiring Z\n"
      "start A2\n"
      "x -> 1\n"
      "y -> 2\n"
      "C -> x + y\n"
      "D -> y + x\n"
      "A1 -> [C D ; C D]\n"
      "B1 -> [D C ; D C]\n"
      "A2 -> [A1 A1 ; A1 A1]\n"
      "B2 -> [B1 B1 ; B1 B1]\n");
  EqualityStats st;
  CHECK(equalVals(g, g.var("A2"), g.var("B2"), &st));
  CHECK(st.reductions >= 1);
  CHECK(st.maxEquations >= 4);
}

TEST_SUITE_END();
