#pragma once

#include <vector>

#include "mtdd/grammar.hpp"

namespace mtdd {

struct Literal {
  int var = 0;  // 1-based
  bool positive = true;
};

struct Clause {
  std::vector<Literal> lits;  // 1 to 3 literals, strictly increasing var index
};

struct Cnf {
  int numVars = 0;
  std::vector<Clause> clauses;
};

Cnf parseDimacs(const std::string& text);
Cnf parseDimacsFile(const std::string& path);

// assignment bit convention used across the library: the 0-based assignment
// index r encodes x1..xn with x1 as the most significant bit, bit 1 = true
bool clauseSatisfied(const Clause& c, int numVars, std::uint64_t assignment);

Grammar identityMatrix(int n, const Semiring& ring);
Grammar zeroMatrix(int n, const Semiring& ring);
Grammar lowerTriangular(int n, const Semiring& ring);  // 1 on and below the diagonal
Grammar rowIndex(int n);                               // entry (i, j) = i, over Z
Grammar allEqual(int j);                               // every entry 2^j, over Z
Grammar walsh(int n, const Semiring& ring = Semiring::integers());
Grammar scaledIdentity(int n, const Int& c, const Semiring& ring = Semiring::integers());
// concatenation of all 2^m binary strings in lexicographic order; dimension 1,
// over Z; m must be a power of two
Grammar binaryEnumVector(int m);
// 0/1 matrix whose column sums reproduce binaryEnumVector(m)
Grammar productWitness(int m);

struct SatDiag {
  std::vector<Grammar> parts;  // one diagonal grammar per clause, then -m * I
  Grammar combined;            // their pointwise sum; singular iff satisfiable
};
SatDiag satDiag(const Cnf& c);

// one dimension-1 grammar per clause: entry r = 1 iff assignment r satisfies it
std::vector<Grammar> satClauseVectors(const Cnf& c);

struct SatNilpotent {
  Grammar g;
  unsigned exponent;  // power of g that is zero iff the formula is unsatisfiable
};
SatNilpotent satNilpotent(const Cnf& c);

}  // namespace mtdd
