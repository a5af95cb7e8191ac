#include "mtdd/generators.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mtdd/matrix_ops.hpp"

namespace mtdd {

bool clauseSatisfied(const Clause& c, int numVars, std::uint64_t assignment) {
  for (const Literal& l : c.lits) {
    bool value = (assignment >> (numVars - l.var)) & 1;  // x1 is the most significant bit
    if (value == l.positive) return true;
  }
  return false;
}

Cnf parseDimacs(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineNo = 0;
  bool haveHeader = false;
  long numVars = 0, numClauses = 0;
  Cnf cnf;
  std::vector<long> pending;

  auto fail = [&](const std::string& msg) -> void {
    throw ParseError("line " + std::to_string(lineNo) + ": " + msg);
  };

  auto closeClause = [&] {
    if (pending.empty()) fail("empty clause");
    if (pending.size() > 3) fail("clause width exceeds 3");
    Clause cl;
    for (long lit : pending) {
      long v = std::abs(lit);
      if (v < 1 || v > numVars) fail("literal " + std::to_string(lit) + " out of range");
      cl.lits.push_back({static_cast<int>(v), lit > 0});
    }
    std::sort(cl.lits.begin(), cl.lits.end(),
              [](const Literal& a, const Literal& b) { return a.var < b.var; });
    for (std::size_t i = 0; i + 1 < cl.lits.size(); ++i)
      if (cl.lits[i].var == cl.lits[i + 1].var)
        fail(cl.lits[i].positive == cl.lits[i + 1].positive ? "repeated literal in a clause"
                                                            : "complementary literals in a clause");
    cnf.clauses.push_back(std::move(cl));
    pending.clear();
  };

  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream ls(line);
    if (!haveHeader) {
      std::string p, fmt;
      if (!(ls >> p >> fmt >> numVars >> numClauses) || p != "p" || fmt != "cnf" || numVars < 0 ||
          numClauses < 0)
        fail("expected 'p cnf <vars> <clauses>'");
      std::string extra;
      if (ls >> extra) fail("trailing tokens after the header");
      haveHeader = true;
      continue;
    }
    long lit;
    while (ls >> lit) {
      if (lit == 0)
        closeClause();
      else
        pending.push_back(lit);
    }
    if (!ls.eof()) fail("bad literal");
  }
  if (!haveHeader) throw ParseError("missing 'p cnf' header");
  if (!pending.empty()) throw ParseError("unterminated clause at end of input");
  if (static_cast<long>(cnf.clauses.size()) != numClauses)
    throw ParseError("header announces " + std::to_string(numClauses) + " clauses but " +
                     std::to_string(cnf.clauses.size()) + " were given");
  cnf.numVars = static_cast<int>(numVars);
  return cnf;
}

Cnf parseDimacsFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parseDimacs(buf.str());
}

namespace {

void requireHeight(int n) {
  if (n < 0) throw ValidateError("height must be nonnegative");
}

// Z_0..Z_top, one zero value per height
std::vector<Var> zeroChain(Grammar& g, int top, Dim dim) {
  std::vector<Var> z;
  z.push_back(g.addRule("Z0", Rule::constant(0)));
  for (int j = 1; j <= top; ++j)
    z.push_back(g.addRule("Z" + std::to_string(j),
                          dim == Dim::Matrix
                              ? Rule::quad(z[j - 1], z[j - 1], z[j - 1], z[j - 1])
                              : Rule::pair(z[j - 1], z[j - 1])));
  return z;
}

// I_0..I_top over an existing zero chain of matrices
std::vector<Var> identityChain(Grammar& g, int top, const std::vector<Var>& z) {
  std::vector<Var> e;
  e.push_back(g.addRule("I0", Rule::constant(1)));
  for (int j = 1; j <= top; ++j)
    e.push_back(g.addRule("I" + std::to_string(j),
                          Rule::quad(e[j - 1], z[j - 1], z[j - 1], e[j - 1])));
  return e;
}

// E_0..E_top where every entry of E_j is 2^j
std::vector<Var> powerChain(Grammar& g, int top) {
  std::vector<Var> e;
  e.push_back(g.addRule("E0", Rule::constant(1)));
  for (int j = 1; j <= top; ++j) {
    Var h = g.addRule("H" + std::to_string(j), Rule::add(e[j - 1], e[j - 1]));
    e.push_back(g.addRule("E" + std::to_string(j), Rule::quad(h, h, h, h)));
  }
  return e;
}

void checkCnf(const Cnf& c) {
  if (c.numVars < 1) throw ValidateError("cnf needs at least one variable");
  for (const Clause& cl : c.clauses) {
    if (cl.lits.empty() || cl.lits.size() > 3)
      throw ValidateError("clause width must be between 1 and 3");
    int prev = 0;
    for (const Literal& l : cl.lits) {
      if (l.var <= prev)
        throw ValidateError("clause variables must be distinct and increasing");
      if (l.var > c.numVars)
        throw ValidateError("literal x" + std::to_string(l.var) + " out of range");
      prev = l.var;
    }
  }
}

// the literal of cl on variable v, if any
const Literal* litOn(const Clause& cl, int v) {
  for (const Literal& l : cl.lits)
    if (l.var == v) return &l;
  return nullptr;
}

// diagonal indicator of one clause at height n: entry (r, r) = 1 iff the
// r-th assignment satisfies it; height j decides variable x_{n-j+1}
Var clauseDiagInto(Grammar& g, const Clause& cl, int n, const std::vector<Var>& z,
                   const std::vector<Var>& id, const std::string& prefix) {
  Var a = g.addRule(prefix + "A0", Rule::constant(0));
  for (int j = 1; j <= n; ++j) {
    Var onFalse = a, onTrue = a;
    if (const Literal* l = litOn(cl, n - j + 1)) (l->positive ? onTrue : onFalse) = id[j - 1];
    a = g.addRule(prefix + "A" + std::to_string(j),
                  Rule::quad(onFalse, z[j - 1], z[j - 1], onTrue));
  }
  return a;
}

Grammar clauseDiagGrammar(const Clause& cl, int n) {
  Grammar g(Semiring::integers(), Dim::Matrix);
  std::vector<Var> z = zeroChain(g, n - 1, Dim::Matrix);
  std::vector<Var> id = identityChain(g, n - 1, z);
  g.setStart(clauseDiagInto(g, cl, n, z, id, ""));
  g.validate();
  return g;
}

// dimension-1 sibling of clauseDiagInto
Grammar clauseVectorGrammar(const Clause& cl, int n) {
  Grammar g(Semiring::integers(), Dim::Vector);
  std::vector<Var> ones;
  ones.push_back(g.addRule("B0", Rule::constant(1)));
  for (int j = 1; j < n; ++j)
    ones.push_back(g.addRule("B" + std::to_string(j), Rule::pair(ones[j - 1], ones[j - 1])));
  Var a = g.addRule("A0", Rule::constant(0));
  for (int j = 1; j <= n; ++j) {
    Var onFalse = a, onTrue = a;
    if (const Literal* l = litOn(cl, n - j + 1)) (l->positive ? onTrue : onFalse) = ones[j - 1];
    a = g.addRule("A" + std::to_string(j), Rule::pair(onFalse, onTrue));
  }
  g.setStart(a);
  g.validate();
  return g;
}

}  // namespace

Grammar identityMatrix(int n, const Semiring& ring) {
  requireHeight(n);
  Grammar g(ring, Dim::Matrix);
  if (n == 0) {
    g.setStart(g.addRule("I0", Rule::constant(1)));
  } else {
    std::vector<Var> z = zeroChain(g, n - 1, Dim::Matrix);
    g.setStart(identityChain(g, n, z).back());
  }
  g.validate();
  return g;
}

Grammar zeroMatrix(int n, const Semiring& ring) {
  requireHeight(n);
  Grammar g(ring, Dim::Matrix);
  g.setStart(zeroChain(g, n, Dim::Matrix).back());
  g.validate();
  return g;
}

Grammar lowerTriangular(int n, const Semiring& ring) {
  requireHeight(n);
  Grammar g(ring, Dim::Matrix);
  if (n == 0) {
    g.setStart(g.addRule("L0", Rule::constant(1)));
    g.validate();
    return g;
  }
  std::vector<Var> z = zeroChain(g, n - 1, Dim::Matrix);
  Var ones = g.addRule("O0", Rule::constant(1));
  Var l = g.addRule("L0", Rule::constant(1));
  for (int j = 1; j <= n; ++j) {
    l = g.addRule("L" + std::to_string(j), Rule::quad(l, z[j - 1], ones, l));
    if (j < n) ones = g.addRule("O" + std::to_string(j), Rule::quad(ones, ones, ones, ones));
  }
  g.setStart(l);
  g.validate();
  return g;
}

Grammar rowIndex(int n) {
  requireHeight(n);
  Grammar g(Semiring::integers(), Dim::Matrix);
  Var c = g.addRule("C0", Rule::constant(1));
  if (n > 0) {
    std::vector<Var> e = powerChain(g, n - 1);
    for (int j = 1; j <= n; ++j) {
      Var s = g.addRule("S" + std::to_string(j - 1), Rule::add(c, e[j - 1]));
      c = g.addRule("C" + std::to_string(j), Rule::quad(c, c, s, s));
    }
  }
  g.setStart(c);
  g.validate();
  return g;
}

Grammar allEqual(int j) {
  requireHeight(j);
  Grammar g(Semiring::integers(), Dim::Matrix);
  g.setStart(powerChain(g, j).back());
  g.validate();
  return g;
}

Grammar walsh(int n, const Semiring& ring) {
  requireHeight(n);
  Grammar g(ring, Dim::Matrix);
  Var w = g.addRule("W0", Rule::constant(1));
  if (n > 0) {
    Var nw = g.addRule("negW0", Rule::constant(-1));
    for (int j = 1; j < n; ++j) {
      Var w2 = g.addRule("W" + std::to_string(j), Rule::quad(w, w, w, nw));
      nw = g.addRule("negW" + std::to_string(j), Rule::quad(nw, nw, nw, w));
      w = w2;
    }
    w = g.addRule("W" + std::to_string(n), Rule::quad(w, w, w, nw));
  }
  g.setStart(w);
  g.validate();
  return g;
}

Grammar scaledIdentity(int n, const Int& c, const Semiring& ring) {
  requireHeight(n);
  if (c == 0) throw ValidateError("scale must be nonzero");
  Grammar g(ring, Dim::Matrix);

  // doubling chain: P_t holds sign(c) * 2^t, the terminal adds the set bits
  const Int mag = abs(c);
  const int bits = magnitudeBits(mag);
  std::vector<Var> p;
  p.push_back(g.addRule("P0", Rule::constant(c < 0 ? -1 : 1)));
  for (int t = 1; t < bits; ++t)
    p.push_back(g.addRule("P" + std::to_string(t), Rule::add(p[t - 1], p[t - 1])));
  Var term = kNoVar;
  int joins = 0;
  for (int t = 0; t < bits; ++t) {
    if (!bitOf(mag, t)) continue;
    term = term == kNoVar ? p[t]
                          : g.addRule("T" + std::to_string(joins++), Rule::add(term, p[t]));
  }

  if (n > 0) {
    std::vector<Var> z = zeroChain(g, n - 1, Dim::Matrix);
    for (int j = 1; j <= n; ++j)
      term = g.addRule("D" + std::to_string(j), Rule::quad(term, z[j - 1], z[j - 1], term));
  }
  g.setStart(term);
  g.validate();
  return g;
}

Grammar binaryEnumVector(int m) {
  if (m < 1 || (m & (m - 1)) != 0)
    throw ValidateError("string length must be a positive power of two");
  int d = 0;
  while ((1 << d) < m) ++d;

  Grammar g(Semiring::integers(), Dim::Vector);
  std::vector<Var> z = zeroChain(g, d, Dim::Vector);
  Var one = g.addRule("One", Rule::constant(1));

  // A_{i+1} appends to A_i the same block with one more string position set;
  // position m-1-i flips so the concatenation counts up lexicographically
  Var a = z[d];
  for (int i = 0; i < m; ++i) {
    const int pos = m - 1 - i;
    Var u = one;
    for (int j = 1; j <= d; ++j)
      u = g.addRule("U" + std::to_string(i) + "_" + std::to_string(j),
                    (pos >> (j - 1)) & 1 ? Rule::pair(z[j - 1], u) : Rule::pair(u, z[j - 1]));
    for (int t = 1; t <= i; ++t)
      u = g.addRule("R" + std::to_string(i) + "_" + std::to_string(t), Rule::pair(u, u));
    Var b = g.addRule("B" + std::to_string(i), Rule::add(a, u));
    a = g.addRule("A" + std::to_string(i + 1), Rule::pair(a, b));
  }
  g.setStart(a);
  g.validate();
  return g;
}

Grammar productWitness(int m) {
  if (m < 1 || (m & (m - 1)) != 0)
    throw ValidateError("string length must be a positive power of two");
  int d = 0;
  while ((1 << d) < m) ++d;

  Grammar g(Semiring::integers(), Dim::Matrix);
  std::vector<Var> z = zeroChain(g, d + m - 1, Dim::Matrix);
  Var one = g.addRule("One", Rule::constant(1));

  // C_{i+1} -> [C_i C_i; 0 B_i] where B_i repeats a first-row unit 2^i times,
  // so column sums follow the binaryEnumVector doubling step
  Var c = z[d];
  for (int i = 0; i < m; ++i) {
    const int pos = m - 1 - i;
    Var b = one;
    for (int j = 1; j <= d; ++j)
      b = g.addRule("A" + std::to_string(i) + "_" + std::to_string(j),
                    (pos >> (j - 1)) & 1 ? Rule::quad(z[j - 1], b, z[j - 1], z[j - 1])
                                         : Rule::quad(b, z[j - 1], z[j - 1], z[j - 1]));
    for (int t = 1; t <= i; ++t)
      b = g.addRule("B" + std::to_string(i) + "_" + std::to_string(t),
                    Rule::quad(b, b, z[d + t - 1], z[d + t - 1]));
    c = g.addRule("C" + std::to_string(i + 1), Rule::quad(c, c, z[d + i], b));
  }
  g.setStart(c);
  g.validate();
  return g;
}

SatDiag satDiag(const Cnf& c) {
  checkCnf(c);
  if (c.clauses.empty()) throw ValidateError("cnf has no clauses");
  std::vector<Grammar> parts;
  for (const Clause& cl : c.clauses) parts.push_back(clauseDiagGrammar(cl, c.numVars));
  parts.push_back(scaledIdentity(c.numVars, -Int(static_cast<long>(c.clauses.size()))));
  Grammar combined = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i)
    combined = addTop(combined, combined.start(), parts[i], parts[i].start());
  return {std::move(parts), std::move(combined)};
}

std::vector<Grammar> satClauseVectors(const Cnf& c) {
  checkCnf(c);
  std::vector<Grammar> out;
  out.reserve(c.clauses.size());
  for (const Clause& cl : c.clauses) out.push_back(clauseVectorGrammar(cl, c.numVars));
  return out;
}

SatNilpotent satNilpotent(const Cnf& c) {
  checkCnf(c);
  if (c.clauses.empty()) throw ValidateError("cnf has no clauses");
  const int n = c.numVars;
  const std::size_t m = c.clauses.size();
  int t = 1;
  while ((std::size_t{1} << t) - 1 < m) ++t;
  const std::size_t padded = (std::size_t{1} << t) - 1;

  Grammar g(Semiring::integers(), Dim::Matrix);
  std::vector<Var> z = zeroChain(g, n + t - 1, Dim::Matrix);
  std::vector<Var> id = identityChain(g, n, z);

  // superdiagonal blocks: the clause diagonals, then identity padding
  std::vector<Var> diag(padded + 1, kNoVar);
  for (std::size_t i = 1; i <= padded; ++i)
    diag[i] = i <= m ? clauseDiagInto(g, c.clauses[i - 1], n, z, id,
                                      "C" + std::to_string(i) + "_")
                     : id[n];

  // quadtree over the block grid; subsquares missing the superdiagonal
  // collapse to the shared zero of their height
  auto grid = [&](auto&& self, std::size_t r, std::size_t col, int s) -> Var {
    if (s == 0) return col == r + 1 ? diag[col] : z[n];
    const std::size_t side = std::size_t{1} << s;
    const std::size_t lo = std::max(r, col == 0 ? std::size_t{0} : col - 1);
    const std::size_t hi = std::min({r + side - 1, col + side - 2, padded - 1});
    if (lo > hi) return z[n + s];
    const std::size_t half = side / 2;
    const Var tl = self(self, r, col, s - 1);
    const Var tr = self(self, r, col + half, s - 1);
    const Var bl = self(self, r + half, col, s - 1);
    const Var br = self(self, r + half, col + half, s - 1);
    return g.addRule("N" + std::to_string(s) + "_" + std::to_string(r) + "_" +
                         std::to_string(col),
                     Rule::quad(tl, tr, bl, br));
  };
  g.setStart(grid(grid, 0, 0, t));
  g.validate();
  return {std::move(g), static_cast<unsigned>(padded)};
}

}  // namespace mtdd
