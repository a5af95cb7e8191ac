#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mtdd/automata.hpp"
#include "mtdd/errors.hpp"
#include "mtdd/ints.hpp"
#include "mtdd/matrix_ops.hpp"

namespace mtdd {

void LayeredDfa::check() const {
  if (stateNames.size() < 2) throw ValidateError("automaton needs at least two layers");
  const int d = depth();
  if (stateNames.front().size() != 1) throw ValidateError("layer 0 must hold exactly one state");
  if (stateNames.back().size() != 2)
    throw ValidateError("the last layer must hold exactly two states");
  if (finalState < 0 || finalState > 1) throw ValidateError("final state out of range");
  if (static_cast<int>(next.size()) != d)
    throw ValidateError("transition table layer count mismatch");
  std::set<std::string> names;
  for (std::size_t l = 0; l < stateNames.size(); ++l) {
    if (stateNames[l].empty()) throw ValidateError("layer " + std::to_string(l) + " is empty");
    for (const std::string& n : stateNames[l]) {
      if (n.empty()) throw ValidateError("empty state name in layer " + std::to_string(l));
      for (char c : n)
        if (std::isspace(static_cast<unsigned char>(c)))
          throw ValidateError("state name '" + n + "' contains whitespace");
      if (!names.insert(n).second) throw ValidateError("repeated state name '" + n + "'");
    }
  }
  for (int l = 0; l < d; ++l) {
    if (next[l].size() != stateNames[l].size())
      throw ValidateError("transition table row count mismatch in layer " + std::to_string(l));
    const int below = static_cast<int>(stateNames[l + 1].size());
    for (const auto& row : next[l])
      for (int sym = 0; sym < 4; ++sym)
        if (row[sym] < 0 || row[sym] >= below)
          throw ValidateError("transition target out of range in layer " + std::to_string(l));
  }
}

bool LayeredDfa::accepts(const std::vector<int>& syms) const {
  if (static_cast<int>(syms.size()) != depth())
    throw ValidateError("word length " + std::to_string(syms.size()) +
                        " does not match automaton depth " + std::to_string(depth()));
  int state = 0;
  for (std::size_t l = 0; l < syms.size(); ++l) {
    if (syms[l] < 0 || syms[l] > 3)
      throw ValidateError("symbol " + std::to_string(syms[l]) + " out of range");
    state = next[l][state][syms[l]];
  }
  return state == finalState;
}

namespace {

std::vector<std::string> lineTokens(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) {
        out.push_back(cur);
        cur.clear();
      }
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

const char* kSymbolNames[4] = {"(0,0)", "(0,1)", "(1,0)", "(1,1)"};

int symbolIndex(const std::string& tok) {
  for (int s = 0; s < 4; ++s)
    if (tok == kSymbolNames[s]) return s;
  return -1;
}

bool parseInt(const std::string& tok, int& out) {
  if (tok.empty()) return false;
  long v = 0;
  for (char c : tok) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    v = v * 10 + (c - '0');
    if (v > 1'000'000) return false;
  }
  out = static_cast<int>(v);
  return true;
}

}  // namespace

LayeredDfa parseDfa(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineNo = 0;
  auto fail = [&](const std::string& msg) {
    throw ParseError("line " + std::to_string(lineNo) + ": " + msg);
  };

  LayeredDfa d;
  int depth = -1;
  int nextLayer = 0;
  bool sawFinal = false;
  std::map<std::string, std::pair<int, int>> where;  // name -> (layer, index)

  while (std::getline(in, line)) {
    ++lineNo;
    const std::vector<std::string> tok = lineTokens(line);
    if (tok.empty()) continue;

    if (depth < 0) {
      if (tok.size() != 2 || tok[0] != "depth" || !parseInt(tok[1], depth))
        fail("expected 'depth <n>'");
      if (depth < 1) fail("depth must be at least 1");
      continue;
    }
    if (nextLayer <= depth) {
      if (tok.size() < 4 || tok[0] != "layer" || tok[2] != ":" ||
          tok[1] != std::to_string(nextLayer))
        fail("expected 'layer " + std::to_string(nextLayer) + " : <states>'");
      std::vector<std::string> names(tok.begin() + 3, tok.end());
      for (std::size_t s = 0; s < names.size(); ++s)
        if (!where.emplace(names[s], std::make_pair(nextLayer, static_cast<int>(s))).second)
          fail("repeated state name '" + names[s] + "'");
      d.stateNames.push_back(std::move(names));
      ++nextLayer;
      continue;
    }
    if (!sawFinal) {
      if (tok.size() != 2 || tok[0] != "final") fail("expected 'final <state>'");
      const auto& last = d.stateNames.back();
      const auto it = std::find(last.begin(), last.end(), tok[1]);
      if (it == last.end()) fail("final state '" + tok[1] + "' is not in the last layer");
      d.finalState = static_cast<int>(it - last.begin());
      sawFinal = true;
      d.next.resize(depth);
      for (int l = 0; l < depth; ++l)
        d.next[l].assign(d.stateNames[l].size(), {-1, -1, -1, -1});
      continue;
    }
    if (tok.size() != 4 || tok[2] != "->") fail("malformed transition line");
    const int sym = symbolIndex(tok[1]);
    if (sym < 0) fail("bad symbol '" + tok[1] + "'");
    const auto src = where.find(tok[0]);
    if (src == where.end()) fail("unknown state '" + tok[0] + "'");
    const auto [l, s] = src->second;
    if (l == depth) fail("state '" + tok[0] + "' is in the last layer and has no transitions");
    const auto dst = where.find(tok[3]);
    if (dst == where.end() || dst->second.first != l + 1)
      fail("unknown state '" + tok[3] + "' in layer " + std::to_string(l + 1));
    if (d.next[l][s][sym] != -1)
      fail("duplicate transition for '" + tok[0] + "' on " + tok[1]);
    d.next[l][s][sym] = dst->second.second;
  }

  if (depth < 0) throw ParseError("missing 'depth' header");
  if (nextLayer <= depth) throw ParseError("missing layer " + std::to_string(nextLayer));
  if (!sawFinal) throw ParseError("missing 'final' line");
  for (int l = 0; l < depth; ++l)
    for (std::size_t s = 0; s < d.next[l].size(); ++s)
      for (int sym = 0; sym < 4; ++sym)
        if (d.next[l][s][sym] == -1)
          throw ParseError("missing transition for '" + d.stateNames[l][s] + "' on " +
                           kSymbolNames[sym]);
  d.check();
  return d;
}

LayeredDfa parseDfaFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parseDfa(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string serializeDfa(const LayeredDfa& d) {
  d.check();
  std::ostringstream out;
  out << "depth " << d.depth() << "\n";
  for (std::size_t l = 0; l < d.stateNames.size(); ++l) {
    out << "layer " << l << " :";
    for (const std::string& n : d.stateNames[l]) out << " " << n;
    out << "\n";
  }
  out << "final " << d.stateNames.back()[d.finalState] << "\n";
  for (int l = 0; l < d.depth(); ++l)
    for (std::size_t s = 0; s < d.stateNames[l].size(); ++s)
      for (int sym = 0; sym < 4; ++sym)
        out << d.stateNames[l][s] << " " << kSymbolNames[sym] << " -> "
            << d.stateNames[l + 1][d.next[l][s][sym]] << "\n";
  return out.str();
}

namespace {

std::string identName(const std::string& raw, std::set<std::string>& taken) {
  std::string base;
  for (char c : raw)
    base += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  if (base.empty() || std::isdigit(static_cast<unsigned char>(base[0]))) base = "s" + base;
  for (const char* kw : {"semiring", "dim", "start"})
    if (base == kw) base += "_";
  std::string name = base;
  for (int i = 2; taken.count(name) != 0; ++i) name = base + "_" + std::to_string(i);
  taken.insert(name);
  return name;
}

}  // namespace

Grammar dfaToMtdd(const LayeredDfa& d) {
  d.check();
  const int depth = d.depth();
  Grammar g(Semiring::integers(), Dim::Matrix);
  std::set<std::string> taken;
  std::vector<std::vector<Var>> v(depth + 1);
  for (int s = 0; s < 2; ++s)
    v[depth].push_back(g.addRule(identName(d.stateNames[depth][s], taken),
                                 Rule::constant(s == d.finalState ? 1 : 0)));
  for (int l = depth - 1; l >= 0; --l)
    for (std::size_t s = 0; s < d.stateNames[l].size(); ++s) {
      const auto& t = d.next[l][s];
      v[l].push_back(g.addRule(identName(d.stateNames[l][s], taken),
                               Rule::quad(v[l + 1][t[0]], v[l + 1][t[1]], v[l + 1][t[2]],
                                          v[l + 1][t[3]])));
    }
  g.setStart(v[0][0]);
  g.validate();
  return g;
}

LayeredDfa mtddToDfa(const Grammar& g, Var a) {
  g.requireValidated();
  if (g.dim() != Dim::Matrix)
    throw ValidateError("automaton extraction needs a matrix grammar");
  const int h = g.height(a);
  if (h < 1) throw ValidateError("automaton extraction needs height at least 1");

  std::vector<std::vector<Var>> byLayer(h);
  for (Var v : g.reachableFrom(a)) {
    const Rule& r = g.rule(v);
    if (r.kind == RuleKind::Add)
      throw ValidateError("variable '" + g.nameOf(v) + "' uses an addition rule");
    if (r.kind == RuleKind::Const) {
      if (!(r.value == 0 || r.value == 1))
        throw ValidateError("terminal '" + g.nameOf(v) + "' must be 0 or 1");
      continue;
    }
    byLayer[h - g.height(v)].push_back(v);
  }

  LayeredDfa d;
  std::map<Var, int> pos;
  std::set<std::string> used;
  for (int l = 0; l < h; ++l) {
    std::vector<std::string> names;
    for (Var v : byLayer[l]) {
      pos.emplace(v, static_cast<int>(names.size()));
      names.push_back(g.nameOf(v));
      used.insert(g.nameOf(v));
    }
    d.stateNames.push_back(std::move(names));
  }
  std::string reject = "reject", accept = "accept";
  while (used.count(reject) != 0 || used.count(accept) != 0) {
    reject += "_";
    accept += "_";
  }
  d.stateNames.push_back({reject, accept});
  d.finalState = 1;

  d.next.resize(h);
  for (int l = 0; l < h; ++l)
    for (Var v : byLayer[l]) {
      const Rule& r = g.rule(v);
      std::array<int, 4> row;
      for (int sym = 0; sym < 4; ++sym) {
        const Var ch = r.ch[sym];
        row[sym] = l + 1 < h ? pos.at(ch) : (g.rule(ch).value == 1 ? 1 : 0);
      }
      d.next[l].push_back(row);
    }
  d.check();
  return d;
}

namespace {

// scan state of the symbol-level one-step automaton. kind: 0 before the
// rewrite window, 1 after it, 2 saw (q, q') of a stay step, 3 saw (d, q') of
// a left step, 4 saw (d, q')(q, d), 5 saw (q, b) of a right step, -1 dead.
struct SymState {
  int kind = -1;
  int x = 0;
  int y = 0;
  auto operator<=>(const SymState&) const = default;
};

struct StepTables {
  int nq = 0, nt = 0;
  std::vector<std::vector<char>> hasS, hasL, hasR;  // [q][q'], [q][q'], [q][b]
  std::vector<char> leftTarget;                     // [q']
};

StepTables stepTables(const TuringMachine& m) {
  StepTables tb;
  tb.nq = static_cast<int>(m.states.size());
  tb.nt = static_cast<int>(m.tapeSymbols.size());
  tb.hasS.assign(tb.nq, std::vector<char>(tb.nq, 0));
  tb.hasL.assign(tb.nq, std::vector<char>(tb.nq, 0));
  tb.hasR.assign(tb.nq, std::vector<char>(tb.nt, 0));
  tb.leftTarget.assign(tb.nq, 0);
  for (int q = 0; q < tb.nq; ++q)
    for (int a = 0; a < tb.nt; ++a)
      for (const TuringMachine::Step& s : m.delta[q][a]) {
        switch (s.move) {
          case TuringMachine::Move::S:
            tb.hasS[q][s.state] = 1;
            break;
          case TuringMachine::Move::L:
            tb.hasL[q][s.state] = 1;
            tb.leftTarget[s.state] = 1;
            break;
          case TuringMachine::Move::R:
            tb.hasR[q][s.write] = 1;
            break;
        }
      }
  return tb;
}

bool hasStep(const TuringMachine& m, int q, int read, int q2, int write,
             TuringMachine::Move move) {
  for (const TuringMachine::Step& s : m.delta[q][read])
    if (s.state == q2 && s.write == write && s.move == move) return true;
  return false;
}

// consumes one aligned pair of symbol codes; codes outside 1..|Q|+|Gamma| die
SymState symStep(const TuringMachine& m, const StepTables& tb, const SymState& s, int ca,
                 int cb) {
  const SymState dead;
  const int qa = ca >= 1 && ca <= tb.nq ? ca - 1 : -1;
  const int qb = cb >= 1 && cb <= tb.nq ? cb - 1 : -1;
  const int ta = ca > tb.nq && ca <= tb.nq + tb.nt ? ca - 1 - tb.nq : -1;
  const int tc = cb > tb.nq && cb <= tb.nq + tb.nt ? cb - 1 - tb.nq : -1;
  if ((qa < 0 && ta < 0) || (qb < 0 && tc < 0)) return dead;
  switch (s.kind) {
    case 0:
      if (ta >= 0 && tc >= 0) return ta == tc ? s : dead;
      if (qa >= 0 && qb >= 0) return tb.hasS[qa][qb] ? SymState{2, qa, qb} : dead;
      if (ta >= 0 && qb >= 0) return tb.leftTarget[qb] ? SymState{3, ta, qb} : dead;
      return tb.hasR[qa][tc] ? SymState{5, qa, tc} : dead;
    case 2:
      if (ta >= 0 && tc >= 0 && hasStep(m, s.x, ta, s.y, tc, TuringMachine::Move::S))
        return SymState{1, 0, 0};
      return dead;
    case 3:
      if (qa >= 0 && tc == s.x && tb.hasL[qa][s.y]) return SymState{4, qa, s.y};
      return dead;
    case 4:
      if (ta >= 0 && tc >= 0 && hasStep(m, s.x, ta, s.y, tc, TuringMachine::Move::L))
        return SymState{1, 0, 0};
      return dead;
    case 5:
      if (ta >= 0 && qb >= 0 && hasStep(m, s.x, ta, qb, s.y, TuringMachine::Move::R))
        return SymState{1, 0, 0};
      return dead;
    case 1:
      return ta >= 0 && ta == tc ? s : dead;
    default:
      return dead;
  }
}

std::string symName(const TuringMachine& m, const SymState& s) {
  switch (s.kind) {
    case 0:
      return "pre";
    case 1:
      return "post";
    case 2:
      return "S_" + m.states[s.x] + "_" + m.states[s.y];
    case 3:
      return "La_" + m.tapeSymbols[s.x] + "_" + m.states[s.y];
    case 4:
      return "Lb_" + m.states[s.x] + "_" + m.states[s.y];
    case 5:
      return "R_" + m.states[s.x] + "_" + m.tapeSymbols[s.y];
    default:
      return "dead";
  }
}

struct BitKey {
  SymState s;
  int a = 0, b = 0;  // partial codes inside the current block
  auto operator<=>(const BitKey&) const = default;
};

}  // namespace

LayeredDfa tmStepDfa(const TuringMachine& m, int tapeLen) {
  m.check();
  if (tapeLen < 1) throw ValidateError("tape length must be at least 1");
  const StepTables tb = stepTables(m);
  const int k = encodingWidth(m);
  const int depth = k * (tapeLen + 1);

  std::vector<std::map<BitKey, int>> index(depth);
  std::vector<std::vector<BitKey>> keys(depth);
  auto intern = [&](int layer, const BitKey& key) {
    auto [it, fresh] = index[layer].emplace(key, static_cast<int>(keys[layer].size()));
    if (fresh) keys[layer].push_back(key);
    return it->second;
  };

  LayeredDfa d;
  d.stateNames.assign(depth + 1, {});
  d.next.assign(depth, {});
  intern(0, BitKey{SymState{0, 0, 0}, 0, 0});
  for (int layer = 0; layer < depth; ++layer) {
    const int t = layer % k;
    for (std::size_t s = 0; s < keys[layer].size(); ++s) {
      const BitKey cur = keys[layer][s];
      std::array<int, 4> row{};
      for (int sym = 0; sym < 4; ++sym) {
        BitKey nk;
        if (cur.s.kind != -1) {
          const int a2 = cur.a * 2 + (sym >> 1);
          const int b2 = cur.b * 2 + (sym & 1);
          if (t == k - 1)
            nk.s = symStep(m, tb, cur.s, a2, b2);
          else
            nk = BitKey{cur.s, a2, b2};
        }
        row[sym] = layer == depth - 1 ? (nk.s.kind == 1 ? 1 : 0) : intern(layer + 1, nk);
      }
      d.next[layer].push_back(row);
    }
  }
  for (int layer = 0; layer < depth; ++layer) {
    std::set<std::string> taken;
    for (const BitKey& key : keys[layer]) {
      std::string name = symName(m, key.s);
      if (layer % k != 0) name += "_" + std::to_string(key.a) + "_" + std::to_string(key.b);
      name += "@" + std::to_string(layer);
      while (taken.count(name) != 0) name += "~";
      taken.insert(name);
      d.stateNames[layer].push_back(name);
    }
  }
  d.stateNames[depth] = {"reject", "accept"};
  d.finalState = 1;
  d.check();
  return d;
}

namespace {

// height-bits grammar with a single 1 at the given 1-based entry
Grammar unitEntry(int bits, const Int& row, const Int& col) {
  Grammar g(Semiring::integers(), Dim::Matrix);
  std::vector<Var> z(bits);
  z[0] = g.addRule("Z0", Rule::constant(0));
  for (int t = 1; t < bits; ++t)
    z[t] = g.addRule("Z" + std::to_string(t), Rule::quad(z[t - 1], z[t - 1], z[t - 1], z[t - 1]));
  Var p = g.addRule("P0", Rule::constant(1));
  const Int r = row - 1, c = col - 1;
  for (int t = 1; t <= bits; ++t) {
    std::array<Var, 4> ch = {z[t - 1], z[t - 1], z[t - 1], z[t - 1]};
    const int sym = 2 * int(bitOf(r, t - 1)) + int(bitOf(c, t - 1));
    ch[sym] = p;
    p = g.addRule("P" + std::to_string(t), Rule::quad(ch[0], ch[1], ch[2], ch[3]));
  }
  g.setStart(p);
  g.validate();
  return g;
}

// identity matrix of height bits with the (1,1) entry removed
Grammar loopsOffOrigin(int bits) {
  Grammar g(Semiring::integers(), Dim::Matrix);
  std::vector<Var> z(bits), id(bits);
  z[0] = g.addRule("Z0", Rule::constant(0));
  id[0] = g.addRule("I0", Rule::constant(1));
  for (int t = 1; t < bits; ++t) {
    z[t] = g.addRule("Z" + std::to_string(t), Rule::quad(z[t - 1], z[t - 1], z[t - 1], z[t - 1]));
    id[t] = g.addRule("I" + std::to_string(t), Rule::quad(id[t - 1], z[t - 1], z[t - 1], id[t - 1]));
  }
  Var d = g.addRule("D0", Rule::constant(0));
  for (int t = 1; t <= bits; ++t)
    d = g.addRule("D" + std::to_string(t), Rule::quad(d, z[t - 1], z[t - 1], id[t - 1]));
  g.setStart(d);
  g.validate();
  return g;
}

}  // namespace

Grammar reductionGraph(const TuringMachine& m, ReductionKind kind,
                       const std::vector<std::string>& input, int tapeLen) {
  m.check();
  if (kind == ReductionKind::Det && !m.deterministic())
    throw ValidateError("the determinant reduction needs a deterministic machine");
  std::vector<int> in;
  in.reserve(input.size());
  for (const std::string& name : input) in.push_back(m.tapeIndex(name));
  const TmWord w0 = initialWord(m, in, tapeLen);
  const TmWord wf = acceptingWord(m, tapeLen);
  const int bits = encodingWidth(m) * (tapeLen + 1);

  Grammar graph = dfaToMtdd(tmStepDfa(m, tapeLen));
  const Grammar enter = unitEntry(bits, Int(1), wordIndex(m, w0));
  graph = addTop(graph, graph.start(), enter, enter.start());
  const Grammar leave = unitEntry(bits, wordIndex(m, wf), Int(1));
  graph = addTop(graph, graph.start(), leave, leave.start());
  if (kind == ReductionKind::Det) {
    const Grammar loops = loopsOffOrigin(bits);
    graph = addTop(graph, graph.start(), loops, loops.start());
  }
  return graph;
}

}  // namespace mtdd
