#include "mtdd/matrix_ops.hpp"

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mtdd/plus_circuit.hpp"

namespace mtdd {

namespace {

std::uint64_t key(Var a, Var b) { return (std::uint64_t(a) << 32) | b; }

// reachable copy with every block's off-diagonal children swapped
Var importTransposed(Grammar& out, const Grammar& g, Var a) {
  std::vector<std::optional<Var>> memo(g.varCount());
  std::vector<std::pair<Var, bool>> stack{{a, false}};
  while (!stack.empty()) {
    auto [v, ready] = stack.back();
    stack.pop_back();
    if (memo[v]) continue;
    Rule r = g.rule(v);
    const std::size_t arity = r.kind == RuleKind::Quad ? 4
                              : r.kind == RuleKind::Const ? 0
                                                          : 2;
    if (!ready && arity > 0) {
      stack.emplace_back(v, true);
      for (std::size_t i = arity; i-- > 0;) stack.emplace_back(r.ch[i], false);
      continue;
    }
    for (std::size_t i = 0; i < arity; ++i) r.ch[i] = *memo[r.ch[i]];
    if (r.kind == RuleKind::Quad) std::swap(r.ch[1], r.ch[2]);
    std::string name = g.nameOf(v);
    if (out.hasVar(name)) {
      int suffix = 2;
      while (out.hasVar(name + "_" + std::to_string(suffix))) ++suffix;
      name += "_" + std::to_string(suffix);
    }
    memo[v] = out.addRule(name, std::move(r));
  }
  return *memo[a];
}

// interning with a growth guard shared by the product-style recursions
struct Builder {
  Grammar out;
  std::size_t limit;

  Builder(Semiring ring, Dim dim, std::size_t ruleLimit) : out(ring, dim), limit(ruleLimit) {}

  Var intern(Rule r) {
    Var v = out.internRule(std::move(r));
    if (out.varCount() > limit)
      throw CapError("operation exceeded the rule limit of " + std::to_string(limit));
    return v;
  }
};

Grammar identityGrammar(int height, const Semiring& ring) {
  Grammar g(ring, Dim::Matrix);
  if (height == 0) {
    g.setStart(g.addRule("I0", Rule::constant(1)));
    g.validate();
    return g;
  }
  Var i = g.addRule("I0", Rule::constant(1));
  Var o = g.addRule("O0", Rule::constant(0));
  for (int j = 1; j <= height; ++j) {
    Var i2 = g.addRule("I" + std::to_string(j), Rule::quad(i, o, o, i));
    if (j < height) o = g.addRule("O" + std::to_string(j), Rule::quad(o, o, o, o));
    i = i2;
  }
  g.setStart(i);
  g.validate();
  return g;
}

struct Mul : Builder {
  const Grammar& g1;
  const Grammar& g2;
  std::unordered_map<std::uint64_t, Var> memo;

  Mul(const Grammar& a, const Grammar& b, std::size_t ruleLimit)
      : Builder(a.ring(), a.dim(), ruleLimit), g1(a), g2(b) {}

  Var pair(Var v1, Var v2) {
    auto it = memo.find(key(v1, v2));
    if (it != memo.end()) return it->second;
    const Rule& r1 = g1.rule(v1);
    const Rule& r2 = g2.rule(v2);
    Var res;
    if (r1.kind == RuleKind::Const && r2.kind == RuleKind::Const) {
      res = intern(Rule::constant(out.ring().mul(r1.value, r2.value)));
    } else if (r1.kind == RuleKind::Add) {
      Var x = pair(r1.ch[0], v2);
      Var y = pair(r1.ch[1], v2);
      res = intern(Rule::add(x, y));
    } else if (r2.kind == RuleKind::Add) {
      Var x = pair(v1, r2.ch[0]);
      Var y = pair(v1, r2.ch[1]);
      res = intern(Rule::add(x, y));
    } else if (r1.kind == RuleKind::Quad) {
      // row i of the left blocks against column j of the right blocks
      std::array<Var, 4> c;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          Var x = pair(r1.ch[2 * i + 0], r2.ch[0 * 2 + j]);
          Var y = pair(r1.ch[2 * i + 1], r2.ch[1 * 2 + j]);
          c[2 * i + j] = intern(Rule::add(x, y));
        }
      res = intern(Rule::quad(c[0], c[1], c[2], c[3]));
    } else {
      // row pair against quad blocks
      Var p1 = intern(Rule::add(pair(r1.ch[0], r2.ch[0]), pair(r1.ch[1], r2.ch[2])));
      Var p2 = intern(Rule::add(pair(r1.ch[0], r2.ch[1]), pair(r1.ch[1], r2.ch[3])));
      res = intern(Rule::pair(p1, p2));
    }
    memo.emplace(key(v1, v2), res);
    return res;
  }
};

struct Tensor : Builder {
  const Grammar& g1;
  const Grammar& g2;
  std::unordered_map<std::uint64_t, Var> memo;

  Tensor(const Grammar& a, const Grammar& b, std::size_t ruleLimit)
      : Builder(a.ring(), Dim::Matrix, ruleLimit), g1(a), g2(b) {}

  Var pair(Var v1, Var v2) {
    auto it = memo.find(key(v1, v2));
    if (it != memo.end()) return it->second;
    const Rule& r1 = g1.rule(v1);
    const Rule& r2 = g2.rule(v2);
    Var res;
    if (r1.kind == RuleKind::Const) {
      if (r2.kind == RuleKind::Const) {
        res = intern(Rule::constant(out.ring().mul(r1.value, r2.value)));
      } else if (r2.kind == RuleKind::Add) {
        Var x = pair(v1, r2.ch[0]);
        Var y = pair(v1, r2.ch[1]);
        res = intern(Rule::add(x, y));
      } else {
        res = intern(Rule::quad(pair(v1, r2.ch[0]), pair(v1, r2.ch[1]), pair(v1, r2.ch[2]),
                                pair(v1, r2.ch[3])));
      }
    } else if (r1.kind == RuleKind::Add) {
      Var x = pair(r1.ch[0], v2);
      Var y = pair(r1.ch[1], v2);
      res = intern(Rule::add(x, y));
    } else {
      res = intern(Rule::quad(pair(r1.ch[0], v2), pair(r1.ch[1], v2), pair(r1.ch[2], v2),
                              pair(r1.ch[3], v2)));
    }
    memo.emplace(key(v1, v2), res);
    return res;
  }
};

struct Hadamard : Builder {
  const Grammar& g1;
  const Grammar& g2;
  std::unordered_map<std::uint64_t, Var> memo;

  Hadamard(const Grammar& a, const Grammar& b, std::size_t ruleLimit)
      : Builder(a.ring(), a.dim(), ruleLimit), g1(a), g2(b) {}

  Var pair(Var v1, Var v2) {
    auto it = memo.find(key(v1, v2));
    if (it != memo.end()) return it->second;
    const Rule& r1 = g1.rule(v1);
    const Rule& r2 = g2.rule(v2);
    Var res;
    if (r1.kind == RuleKind::Add) {
      Var x = pair(r1.ch[0], v2);
      Var y = pair(r1.ch[1], v2);
      res = intern(Rule::add(x, y));
    } else if (r2.kind == RuleKind::Add) {
      Var x = pair(v1, r2.ch[0]);
      Var y = pair(v1, r2.ch[1]);
      res = intern(Rule::add(x, y));
    } else if (r1.kind == RuleKind::Const) {
      res = intern(Rule::constant(out.ring().mul(r1.value, r2.value)));
    } else if (r1.kind == RuleKind::Quad) {
      res = intern(Rule::quad(pair(r1.ch[0], r2.ch[0]), pair(r1.ch[1], r2.ch[1]),
                              pair(r1.ch[2], r2.ch[2]), pair(r1.ch[3], r2.ch[3])));
    } else {
      res = intern(Rule::pair(pair(r1.ch[0], r2.ch[0]), pair(r1.ch[1], r2.ch[1])));
    }
    memo.emplace(key(v1, v2), res);
    return res;
  }
};

void requireSameRing(const Grammar& g1, const Grammar& g2) {
  if (g1.ring() != g2.ring()) throw ValidateError("operands live in different semirings");
}

void requireSameHeight(const Grammar& g1, Var a1, const Grammar& g2, Var a2) {
  if (g1.height(a1) != g2.height(a2)) throw ValidateError("operands have different heights");
}

}  // namespace

Grammar multiply(const Grammar& g1, Var a1, const Grammar& g2, Var a2, std::size_t ruleLimit) {
  g1.requireValidated();
  g2.requireValidated();
  requireSameRing(g1, g2);
  requireSameHeight(g1, a1, g2, a2);
  if (g2.dim() != Dim::Matrix) throw ValidateError("right operand of a product must be a matrix");
  Mul m(g1, g2, ruleLimit);
  m.out.setStart(m.pair(a1, a2));
  m.out.validate();
  return std::move(m.out);
}

Grammar addTop(const Grammar& g1, Var a1, const Grammar& g2, Var a2) {
  g1.requireValidated();
  g2.requireValidated();
  requireSameRing(g1, g2);
  requireSameHeight(g1, a1, g2, a2);
  if (g1.dim() != g2.dim()) throw ValidateError("operands have different dimensions");
  Grammar out(g1.ring(), g1.dim());
  Var m1 = copyValueInto(out, g1, a1);
  Var m2 = copyValueInto(out, g2, a2);
  out.setStart(out.internRule(Rule::add(m1, m2)));
  out.validate();
  return out;
}

Grammar transposeG(const Grammar& g, Var a) {
  g.requireValidated();
  if (g.dim() != Dim::Matrix) throw ValidateError("transpose requires a dimension-2 value");
  Grammar out(g.ring(), g.dim());
  out.setStart(importTransposed(out, g, a));
  out.validate();
  return out;
}

namespace {

// resolve one entry: block rules route by index bits, additions stay
CircuitResult resolveEntry(const Grammar& g, Var a, const Int& i0, const Int& j0) {
  Grammar out(g.ring(), g.dim());
  std::vector<std::optional<Var>> memo(g.varCount());
  // bits below height(v) of i0/j0 are the coordinates inside v's block, so
  // the resolution of v does not depend on the path that reached it
  auto resolve = [&](auto&& self, Var v) -> Var {
    if (memo[v]) return *memo[v];
    const Rule& r = g.rule(v);
    Var res;
    switch (r.kind) {
      case RuleKind::Const:
        res = out.internRule(Rule::constant(r.value));
        break;
      case RuleKind::Add: {
        Var x = self(self, r.ch[0]);
        Var y = self(self, r.ch[1]);
        res = out.internRule(Rule::add(x, y));
        break;
      }
      case RuleKind::Quad: {
        const int b = g.height(v) - 1;
        res = self(self, r.ch[2 * bitOf(i0, b) + bitOf(j0, b)]);
        break;
      }
      case RuleKind::Pair: {
        const int b = g.height(v) - 1;
        res = self(self, r.ch[bitOf(j0, b)]);
        break;
      }
      default:
        throw ValidateError("unreachable rule kind");
    }
    memo[v] = res;
    return res;
  };
  out.setStart(resolve(resolve, a));
  out.validate();
  Int value = evalCircuit(out, out.start());
  return {std::move(out), std::move(value)};
}

}  // namespace

CircuitResult entryOf(const Grammar& g, Var a, const Int& i, const Int& j) {
  g.requireValidated();
  if (g.dim() != Dim::Matrix)
    throw ValidateError("two-index entry lookup requires a dimension-2 value");
  const Int n = pow2(static_cast<unsigned>(g.height(a)));
  if (i < 1 || i > n || j < 1 || j > n) throw ValidateError("entry index out of range");
  return resolveEntry(g, a, Int(i - 1), Int(j - 1));
}

CircuitResult entryOf(const Grammar& g, Var a, const Int& i) {
  g.requireValidated();
  if (g.dim() != Dim::Vector)
    throw ValidateError("single-index entry lookup requires a dimension-1 value");
  const Int n = pow2(static_cast<unsigned>(g.height(a)));
  if (i < 1 || i > n) throw ValidateError("entry index out of range");
  return resolveEntry(g, a, Int(0), Int(i - 1));
}

CircuitResult aggregate(const Grammar& g, Var a, Aggregate kind) {
  g.requireValidated();
  if (kind == Aggregate::Trace && g.dim() != Dim::Matrix)
    throw ValidateError("trace requires a dimension-2 value");
  Grammar out(g.ring(), g.dim());
  std::vector<std::optional<Var>> memo(g.varCount());
  auto walk = [&](auto&& self, Var v) -> Var {
    if (memo[v]) return *memo[v];
    const Rule& r = g.rule(v);
    Var res;
    switch (r.kind) {
      case RuleKind::Const:
        res = out.internRule(Rule::constant(r.value));
        break;
      case RuleKind::Add: {
        Var x = self(self, r.ch[0]);
        Var y = self(self, r.ch[1]);
        res = out.internRule(Rule::add(x, y));
        break;
      }
      case RuleKind::Pair: {
        Var x = self(self, r.ch[0]);
        Var y = self(self, r.ch[1]);
        res = out.internRule(Rule::add(x, y));
        break;
      }
      case RuleKind::Quad: {
        if (kind == Aggregate::Trace) {
          Var x = self(self, r.ch[0]);
          Var y = self(self, r.ch[3]);
          res = out.internRule(Rule::add(x, y));
        } else {
          Var top = out.internRule(Rule::add(self(self, r.ch[0]), self(self, r.ch[1])));
          Var bot = out.internRule(Rule::add(self(self, r.ch[2]), self(self, r.ch[3])));
          res = out.internRule(Rule::add(top, bot));
        }
        break;
      }
      default:
        throw ValidateError("unreachable rule kind");
    }
    memo[v] = res;
    return res;
  };
  out.setStart(walk(walk, a));
  out.validate();
  Int value = evalCircuit(out, out.start());
  return {std::move(out), std::move(value)};
}

Grammar tensorG(const Grammar& g1, Var a1, const Grammar& g2, Var a2, std::size_t ruleLimit) {
  g1.requireValidated();
  g2.requireValidated();
  requireSameRing(g1, g2);
  if (g1.dim() != Dim::Matrix || g2.dim() != Dim::Matrix)
    throw ValidateError("tensor product requires dimension-2 values");
  Tensor t(g1, g2, ruleLimit);
  t.out.setStart(t.pair(a1, a2));
  t.out.validate();
  return std::move(t.out);
}

Grammar hadamardG(const Grammar& g1, Var a1, const Grammar& g2, Var a2, std::size_t ruleLimit) {
  g1.requireValidated();
  g2.requireValidated();
  requireSameRing(g1, g2);
  requireSameHeight(g1, a1, g2, a2);
  if (g1.dim() != g2.dim()) throw ValidateError("operands have different dimensions");
  Hadamard h(g1, g2, ruleLimit);
  h.out.setStart(h.pair(a1, a2));
  h.out.validate();
  return std::move(h.out);
}

Grammar powerG(const Grammar& g, Var a, unsigned n, std::size_t ruleLimit) {
  g.requireValidated();
  if (g.dim() != Dim::Matrix) throw ValidateError("powers require a dimension-2 value");
  if (n == 0) return identityGrammar(g.height(a), g.ring());
  Grammar acc(g.ring(), g.dim());
  acc.setStart(copyValueInto(acc, g, a));
  acc.validate();
  for (unsigned t = 1; t < n; ++t) acc = multiply(acc, acc.start(), g, a, ruleLimit);
  return acc;
}

}  // namespace mtdd
