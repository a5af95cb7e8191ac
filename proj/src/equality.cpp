#include "mtdd/equality.hpp"

#include <algorithm>

#include "mtdd/linear_solver.hpp"

namespace mtdd {

namespace {

void note(EqualityStats* st, const EquationSystem& sys) {
  if (!st) return;
  st->maxEquations = std::max(st->maxEquations, sys.eqs.size());
  st->maxVars = std::max(st->maxVars, varIndex(sys).size());
  for (const Equation& e : sys.eqs)
    for (const auto& [v, c] : e)
      if (Int a = abs(c); a > st->maxAbsCoeff) st->maxAbsCoeff = a;
}

// replace every height-h addition variable by its children; coefficients
// accumulate, so shared subtrees merge instead of multiplying out
void expandAdds(const Grammar& g, EquationSystem& sys, int h) {
  for (Equation& e : sys.eqs) {
    Equation out;
    std::vector<std::pair<Var, Int>> work(e.begin(), e.end());
    while (!work.empty()) {
      auto [v, c] = work.back();
      work.pop_back();
      const Rule& r = g.rule(v);
      if (r.kind == RuleKind::Add && g.height(v) == h) {
        work.emplace_back(r.ch[0], c);
        work.emplace_back(r.ch[1], c);
      } else {
        out[v] += c;
      }
    }
    e = std::move(out);
  }
}

// homogeneous system of equal-height values; true iff every equation is zero
bool decideZero(const Grammar& g, EquationSystem sys, EqualityStats* st) {
  standardize(sys);
  note(st, sys);
  int top = 0;
  for (const Equation& e : sys.eqs)
    for (const auto& [v, c] : e) {
      (void)c;
      top = std::max(top, g.height(v));
    }

  const int slots = g.dim() == Dim::Matrix ? 4 : 2;
  for (int h = top; h >= 1; --h) {
    if (sys.eqs.empty()) return true;
    if (sys.eqs.size() > varIndex(sys).size()) {
      sys = reduceSystem(sys);
      if (st) ++st->reductions;
    }
    expandAdds(g, sys, h);
    standardize(sys);
    note(st, sys);
    // every surviving variable now carries a block rule of height h
    std::vector<Equation> next;
    next.reserve(sys.eqs.size() * slots);
    for (const Equation& e : sys.eqs)
      for (int s = 0; s < slots; ++s) {
        Equation ne;
        for (const auto& [v, c] : e) ne[g.rule(v).ch[s]] += c;
        next.push_back(std::move(ne));
      }
    sys.eqs = std::move(next);
    standardize(sys);
    note(st, sys);
  }

  expandAdds(g, sys, 0);
  standardize(sys);
  note(st, sys);
  for (const Equation& e : sys.eqs) {
    Int acc = 0;
    for (const auto& [v, c] : e) acc = g.ring().add(acc, g.ring().mul(c, g.rule(v).value));
    if (acc != 0) return false;
  }
  return true;
}

}  // namespace

bool equalVals(const Grammar& g, Var a1, Var a2, EqualityStats* stats) {
  g.requireValidated();
  if (g.height(a1) != g.height(a2))
    throw ValidateError("cannot compare values of different heights");
  EquationSystem sys{g.ring(), {}};
  Equation e;
  e[a1] += 1;
  e[a2] -= 1;
  sys.eqs.push_back(std::move(e));
  return decideZero(g, std::move(sys), stats);
}

bool equalAcross(const Grammar& g1, Var a1, const Grammar& g2, Var a2, EqualityStats* stats) {
  g1.requireValidated();
  g2.requireValidated();
  if (g1.ring() != g2.ring()) throw ValidateError("cannot compare values over different semirings");
  if (g1.dim() != g2.dim()) throw ValidateError("cannot compare values of different dimensions");
  if (g1.height(a1) != g2.height(a2))
    throw ValidateError("cannot compare values of different heights");
  Grammar merged(g1.ring(), g1.dim());
  Var c1 = copyValueInto(merged, g1, a1);
  Var c2 = copyValueInto(merged, g2, a2);
  merged.setStart(c1);
  merged.validate();
  return equalVals(merged, c1, c2, stats);
}

bool isZero(const Grammar& g, Var a, EqualityStats* stats) {
  g.requireValidated();
  EquationSystem sys{g.ring(), {}};
  Equation e;
  e[a] = 1;
  sys.eqs.push_back(std::move(e));
  return decideZero(g, std::move(sys), stats);
}

}  // namespace mtdd
