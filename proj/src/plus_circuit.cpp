#include "mtdd/plus_circuit.hpp"

#include <optional>
#include <vector>

namespace mtdd {

bool isPlusCircuit(const Grammar& g, Var v) {
  g.requireValidated();
  for (Var u : g.reachableFrom(v)) {
    RuleKind k = g.rule(u).kind;
    if (k != RuleKind::Add && k != RuleKind::Const) return false;
  }
  return true;
}

Int evalCircuit(const Grammar& g, Var v, EvalStats* stats) {
  g.requireValidated();
  std::vector<std::optional<Int>> memo(g.varCount());
  std::size_t visited = 0;

  std::vector<std::pair<Var, int>> stack{{v, 0}};
  while (!stack.empty()) {
    auto& [u, phase] = stack.back();
    if (memo[u]) {
      stack.pop_back();
      continue;
    }
    const Rule& r = g.rule(u);
    if (r.kind == RuleKind::Const) {
      memo[u] = r.value;
      ++visited;
      stack.pop_back();
      continue;
    }
    if (r.kind != RuleKind::Add)
      throw ValidateError("variable '" + g.nameOf(u) + "' is not part of a +-circuit");
    if (phase == 0) {
      phase = 1;
      stack.emplace_back(r.ch[0], 0);
      stack.emplace_back(r.ch[1], 0);
      continue;
    }
    memo[u] = g.ring().add(*memo[r.ch[0]], *memo[r.ch[1]]);
    ++visited;
    stack.pop_back();
  }

  if (stats) stats->visited = visited;
  return *memo[v];
}

}  // namespace mtdd
