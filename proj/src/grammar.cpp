#include "mtdd/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace mtdd {

namespace {

void hashCombine(std::size_t& seed, std::size_t v) {
  seed ^= v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2);
}

std::size_t hashInt(const Int& v) {
  const mpz_srcptr p = v.get_mpz_t();
  std::size_t seed = std::hash<long>()(p->_mp_size);
  const std::size_t n = static_cast<std::size_t>(std::abs(p->_mp_size));
  for (std::size_t i = 0; i < n; ++i)
    hashCombine(seed, std::hash<mp_limb_t>()(mpz_getlimbn(p, i)));
  return seed;
}

bool isIdent(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

bool isInteger(const std::string& s) {
  std::size_t i = (s.size() > 1 && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (i >= s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

Rule Rule::quad(Var tl, Var tr, Var bl, Var br) {
  Rule r;
  r.kind = RuleKind::Quad;
  r.ch = {tl, tr, bl, br};
  return r;
}

Rule Rule::pair(Var left, Var right) {
  Rule r;
  r.kind = RuleKind::Pair;
  r.ch = {left, right, kNoVar, kNoVar};
  return r;
}

Rule Rule::add(Var a, Var b) {
  Rule r;
  r.kind = RuleKind::Add;
  r.ch = {a, b, kNoVar, kNoVar};
  return r;
}

Rule Rule::constant(Int v) {
  Rule r;
  r.kind = RuleKind::Const;
  r.value = std::move(v);
  return r;
}

std::size_t RuleHash::operator()(const Rule& r) const {
  std::size_t seed = std::hash<int>()(static_cast<int>(r.kind));
  for (Var c : r.ch) hashCombine(seed, std::hash<Var>()(c));
  if (r.kind == RuleKind::Const) hashCombine(seed, hashInt(r.value));
  return seed;
}

Grammar::Grammar(Semiring ring, Dim dim) : ring_(std::move(ring)), dim_(dim) {}

Var Grammar::fresh(const std::string& name) {
  Var v = static_cast<Var>(names_.size());
  names_.push_back(name);
  rules_.emplace_back();
  hasRule_.push_back(false);
  byName_.emplace(name, v);
  validated_ = false;
  return v;
}

Var Grammar::declare(const std::string& name) {
  auto it = byName_.find(name);
  if (it != byName_.end()) return it->second;
  if (!isIdent(name)) throw ValidateError("bad variable name '" + name + "'");
  return fresh(name);
}

Var Grammar::addRule(const std::string& name, Rule r) {
  Var v = declare(name);
  if (hasRule_[v]) throw ValidateError("duplicate rule for variable '" + name + "'");
  std::size_t arity = r.kind == RuleKind::Quad ? 4
                      : r.kind == RuleKind::Const ? 0
                                                  : 2;
  for (std::size_t i = 0; i < arity; ++i)
    if (r.ch[i] == kNoVar || r.ch[i] >= names_.size())
      throw ValidateError("rule for '" + name + "' references an unknown variable");
  if (r.kind == RuleKind::Const) r.value = ring_.canon(std::move(r.value));
  rules_[v] = std::move(r);
  hasRule_[v] = true;
  byRule_.emplace(rules_[v], v);
  validated_ = false;
  return v;
}

Var Grammar::internRule(Rule r) {
  if (r.kind == RuleKind::Const) r.value = ring_.canon(std::move(r.value));
  auto it = byRule_.find(r);
  if (it != byRule_.end() && hasRule_[it->second]) return it->second;
  std::string name;
  do {
    name = "v" + std::to_string(mintCounter_++);
  } while (byName_.count(name));
  return addRule(name, std::move(r));
}

void Grammar::setStart(Var v) {
  if (v >= names_.size()) throw ValidateError("start variable out of range");
  start_ = v;
  validated_ = false;
}

void Grammar::setStart(const std::string& name) { setStart(var(name)); }

Var Grammar::var(const std::string& name) const {
  auto it = byName_.find(name);
  if (it == byName_.end()) throw ValidateError("unknown variable '" + name + "'");
  return it->second;
}

Var Grammar::start() const {
  if (start_ == kNoVar) throw ValidateError("grammar has no start variable");
  return start_;
}

void Grammar::requireValidated() const {
  if (!validated_) throw ValidateError("grammar is not validated");
}

void Grammar::validate() {
  warnings_.clear();
  const std::size_t n = names_.size();
  if (n == 0) throw ValidateError("grammar has no variables");
  for (std::size_t v = 0; v < n; ++v)
    if (!hasRule_[v])
      throw ValidateError("variable '" + names_[v] + "' referenced but never defined");
  if (start_ == kNoVar) throw ValidateError("grammar has no start variable");

  heights_.assign(n, -1);
  // 0 = unvisited, 1 = on stack, 2 = done
  std::vector<std::uint8_t> color(n, 0);
  for (Var root = 0; root < n; ++root) {
    if (color[root] == 2) continue;
    std::vector<std::pair<Var, std::size_t>> stack{{root, 0}};
    color[root] = 1;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      const Rule& r = rules_[v];
      const std::size_t arity = r.kind == RuleKind::Quad ? 4
                                : r.kind == RuleKind::Const ? 0
                                                            : 2;
      if (next < arity) {
        Var c = r.ch[next++];
        if (c >= n) throw ValidateError("rule for '" + names_[v] + "' references an unknown variable");
        if (color[c] == 1)
          throw ValidateError("cycle through variable '" + names_[c] + "'");
        if (color[c] == 0) {
          color[c] = 1;
          stack.emplace_back(c, 0);
        }
        continue;
      }
      switch (r.kind) {
        case RuleKind::Const:
          heights_[v] = 0;
          break;
        case RuleKind::Add: {
          int h0 = heights_[r.ch[0]], h1 = heights_[r.ch[1]];
          if (h0 != h1)
            throw ValidateError("addition rule for '" + names_[v] +
                                "' mixes heights " + std::to_string(h0) + " and " +
                                std::to_string(h1));
          heights_[v] = h0;
          break;
        }
        case RuleKind::Pair:
        case RuleKind::Quad: {
          if (r.kind == RuleKind::Quad && dim_ == Dim::Vector)
            throw ValidateError("block rule for '" + names_[v] + "' in a dimension-1 grammar");
          if (r.kind == RuleKind::Pair && dim_ == Dim::Matrix)
            throw ValidateError("pair rule for '" + names_[v] + "' in a dimension-2 grammar");
          const std::size_t arity2 = r.kind == RuleKind::Quad ? 4 : 2;
          int h0 = heights_[r.ch[0]];
          for (std::size_t i = 1; i < arity2; ++i)
            if (heights_[r.ch[i]] != h0)
              throw ValidateError("children of '" + names_[v] + "' have unequal heights");
          heights_[v] = h0 + 1;
          break;
        }
      }
      color[v] = 2;
      stack.pop_back();
    }
  }

  int maxH = *std::max_element(heights_.begin(), heights_.end());
  if (heights_[start_] != maxH)
    throw ValidateError("start variable '" + names_[start_] + "' has height " +
                        std::to_string(heights_[start_]) + " but the grammar reaches height " +
                        std::to_string(maxH));
  for (Var v = 0; v < n; ++v)
    if (v != start_ && heights_[v] == maxH)
      warnings_.push_back("variable '" + names_[v] + "' also has maximal height " +
                          std::to_string(maxH));
  validated_ = true;
}

std::vector<Var> Grammar::reachableFrom(Var v) const {
  std::vector<Var> order;
  std::vector<bool> seen(names_.size(), false);
  std::vector<Var> stack{v};
  while (!stack.empty()) {
    Var u = stack.back();
    stack.pop_back();
    if (seen[u]) continue;
    seen[u] = true;
    order.push_back(u);
    const Rule& r = rules_[u];
    const std::size_t arity = r.kind == RuleKind::Quad ? 4
                              : r.kind == RuleKind::Const ? 0
                                                          : 2;
    // push in reverse so children pop in rule order
    for (std::size_t i = arity; i-- > 0;) stack.push_back(r.ch[i]);
  }
  return order;
}

std::uint64_t grammarSize(const Grammar& g) {
  const std::uint64_t perRule = static_cast<std::uint64_t>(ceilLog2(g.varCount()));
  std::uint64_t total = 0;
  for (Var v = 0; v < g.varCount(); ++v) {
    const Rule& r = g.rule(v);
    if (r.kind == RuleKind::Const)
      total += std::max<std::uint64_t>(1, static_cast<std::uint64_t>(magnitudeBits(r.value)));
    else
      total += perRule;
  }
  return total;
}

Var copyValueInto(Grammar& out, const Grammar& g, Var a) {
  if (out.ring() != g.ring()) throw ValidateError("copy between different semirings");
  if (out.dim() != g.dim()) throw ValidateError("copy between different dimensions");
  std::vector<Var> map(g.varCount(), kNoVar);
  std::vector<std::pair<Var, bool>> stack{{a, false}};
  while (!stack.empty()) {
    auto [v, ready] = stack.back();
    stack.pop_back();
    if (map[v] != kNoVar) continue;
    Rule r = g.rule(v);
    const std::size_t arity = r.kind == RuleKind::Quad ? 4
                              : r.kind == RuleKind::Const ? 0
                                                          : 2;
    if (!ready && arity > 0) {
      stack.emplace_back(v, true);
      for (std::size_t i = arity; i-- > 0;) stack.emplace_back(r.ch[i], false);
      continue;
    }
    for (std::size_t i = 0; i < arity; ++i) r.ch[i] = map[r.ch[i]];
    std::string name = g.nameOf(v);
    if (out.hasVar(name)) {
      int suffix = 2;
      while (out.hasVar(name + "_" + std::to_string(suffix))) ++suffix;
      name += "_" + std::to_string(suffix);
    }
    map[v] = out.addRule(name, std::move(r));
  }
  return map[a];
}

MergeResult mergeDisjoint(const Grammar& g1, const Grammar& g2) {
  g1.requireValidated();
  g2.requireValidated();
  if (g1.ring() != g2.ring())
    throw ValidateError("cannot merge grammars over " + g1.ring().describe() + " and " +
                        g2.ring().describe());
  if (g1.dim() != g2.dim()) throw ValidateError("cannot merge grammars of different dimension");

  MergeResult res{Grammar(g1.ring(), g1.dim()), {}, {}};
  Grammar& m = res.merged;

  res.map1.resize(g1.varCount());
  for (Var v = 0; v < g1.varCount(); ++v) res.map1[v] = m.declare(g1.nameOf(v));
  res.map2.resize(g2.varCount());
  for (Var v = 0; v < g2.varCount(); ++v) {
    std::string name = g2.nameOf(v);
    if (m.hasVar(name)) {
      int suffix = 2;
      while (m.hasVar(name + "_" + std::to_string(suffix))) ++suffix;
      name += "_" + std::to_string(suffix);
    }
    res.map2[v] = m.declare(name);
  }

  auto copyRules = [&m](const Grammar& g, const std::vector<Var>& map) {
    for (Var v = 0; v < g.varCount(); ++v) {
      Rule r = g.rule(v);
      const std::size_t arity = r.kind == RuleKind::Quad ? 4
                                : r.kind == RuleKind::Const ? 0
                                                            : 2;
      for (std::size_t i = 0; i < arity; ++i) r.ch[i] = map[r.ch[i]];
      m.addRule(m.nameOf(map[v]), std::move(r));
    }
  };
  copyRules(g1, res.map1);
  copyRules(g2, res.map2);

  m.setStart(res.map1[g1.start()]);
  m.validate();
  return res;
}

namespace {

struct RawRule {
  std::string name;
  RuleKind kind;
  std::vector<std::string> children;
  Int value;
  int line;
};

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '[' || c == ']' || c == ';' || c == '+') {
      out.emplace_back(1, c);
      ++i;
      continue;
    }
    if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
      out.emplace_back("->");
      i += 2;
      continue;
    }
    std::size_t j = i;
    if (c == '-') ++j;
    while (j < line.size() && (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_'))
      ++j;
    if (j == i) throw ParseError("unexpected character '" + std::string(1, c) + "'");
    out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

[[noreturn]] void parseFail(int line, const std::string& msg) {
  throw ParseError("line " + std::to_string(line) + ": " + msg);
}

}  // namespace

Grammar parseGrammar(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineNo = 0;

  bool haveRing = false, haveDim = false;
  Semiring ring = Semiring::integers();
  Dim dim = Dim::Matrix;
  std::string startName;
  std::vector<RawRule> raw;

  while (std::getline(in, line)) {
    ++lineNo;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::vector<std::string> tok;
    try {
      tok = tokenize(line);
    } catch (const ParseError& e) {
      parseFail(lineNo, e.what());
    }
    if (tok.empty()) continue;

    if (tok[0] == "semiring") {
      if (haveRing) parseFail(lineNo, "repeated semiring line");
      if (tok.size() == 2 && tok[1] == "Z") {
        ring = Semiring::integers();
      } else if (tok.size() == 3 && tok[1] == "Zmod" && isInteger(tok[2])) {
        Int k(tok[2]);
        if (k < 2) parseFail(lineNo, "modulus must be at least 2");
        ring = Semiring::modular(k);
      } else {
        parseFail(lineNo, "expected 'semiring Z' or 'semiring Zmod <k>'");
      }
      haveRing = true;
      continue;
    }
    if (tok[0] == "dim") {
      if (haveDim) parseFail(lineNo, "repeated dim line");
      if (tok.size() != 2 || (tok[1] != "1" && tok[1] != "2"))
        parseFail(lineNo, "expected 'dim 1' or 'dim 2'");
      dim = tok[1] == "1" ? Dim::Vector : Dim::Matrix;
      haveDim = true;
      continue;
    }
    if (tok[0] == "start") {
      if (!startName.empty()) parseFail(lineNo, "repeated start line");
      if (tok.size() != 2 || !isIdent(tok[1])) parseFail(lineNo, "expected 'start <variable>'");
      for (const char* kw : {"semiring", "dim", "start"})
        if (tok[1] == kw) parseFail(lineNo, std::string("'") + kw + "' is a reserved word");
      startName = tok[1];
      continue;
    }

    // rule line: <name> -> <rhs>
    if (tok.size() < 3 || !isIdent(tok[0]) || tok[1] != "->")
      parseFail(lineNo, "expected '<variable> -> <rule>'");
    RawRule r;
    r.name = tok[0];
    r.line = lineNo;
    std::vector<std::string> rhs(tok.begin() + 2, tok.end());
    if (rhs.size() == 1 && isInteger(rhs[0])) {
      r.kind = RuleKind::Const;
      r.value = Int(rhs[0]);
    } else if (rhs.size() == 3 && isIdent(rhs[0]) && rhs[1] == "+" && isIdent(rhs[2])) {
      r.kind = RuleKind::Add;
      r.children = {rhs[0], rhs[2]};
    } else if (rhs.size() == 4 && rhs[0] == "[" && isIdent(rhs[1]) && isIdent(rhs[2]) &&
               rhs[3] == "]") {
      r.kind = RuleKind::Pair;
      r.children = {rhs[1], rhs[2]};
    } else if (rhs.size() == 7 && rhs[0] == "[" && isIdent(rhs[1]) && isIdent(rhs[2]) &&
               rhs[3] == ";" && isIdent(rhs[4]) && isIdent(rhs[5]) && rhs[6] == "]") {
      r.kind = RuleKind::Quad;
      r.children = {rhs[1], rhs[2], rhs[4], rhs[5]};
    } else {
      parseFail(lineNo, "malformed rule for '" + r.name + "'");
    }
    raw.push_back(std::move(r));
  }

  if (!haveRing) throw ParseError("missing semiring line");
  if (startName.empty()) throw ParseError("missing start line");
  if (raw.empty()) throw ParseError("grammar has no rules");

  for (const char* kw : {"semiring", "dim", "start"})
    for (const RawRule& r : raw)
      if (r.name == kw) parseFail(r.line, std::string("'") + kw + "' is a reserved word");

  Grammar g(ring, dim);
  try {
    for (const RawRule& r : raw) {
      Rule rule;
      switch (r.kind) {
        case RuleKind::Const:
          rule = Rule::constant(r.value);
          break;
        case RuleKind::Add:
          rule = Rule::add(g.declare(r.children[0]), g.declare(r.children[1]));
          break;
        case RuleKind::Pair:
          rule = Rule::pair(g.declare(r.children[0]), g.declare(r.children[1]));
          break;
        case RuleKind::Quad:
          rule = Rule::quad(g.declare(r.children[0]), g.declare(r.children[1]),
                            g.declare(r.children[2]), g.declare(r.children[3]));
          break;
      }
      g.addRule(r.name, std::move(rule));
    }
    g.setStart(g.declare(startName));
    g.validate();
  } catch (const ValidateError& e) {
    throw ParseError(e.what());
  }
  return g;
}

Grammar parseGrammarFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parseGrammar(buf.str());
}

std::string serializeGrammar(const Grammar& g) {
  g.requireValidated();
  std::ostringstream out;
  out << "semiring " << g.ring().describe() << "\n";
  out << "dim " << (g.dim() == Dim::Vector ? 1 : 2) << "\n";
  out << "start " << g.nameOf(g.start()) << "\n";
  for (Var v = 0; v < g.varCount(); ++v) {
    const Rule& r = g.rule(v);
    out << g.nameOf(v) << " -> ";
    switch (r.kind) {
      case RuleKind::Const:
        out << r.value.get_str();
        break;
      case RuleKind::Add:
        out << g.nameOf(r.ch[0]) << " + " << g.nameOf(r.ch[1]);
        break;
      case RuleKind::Pair:
        out << "[" << g.nameOf(r.ch[0]) << " " << g.nameOf(r.ch[1]) << "]";
        break;
      case RuleKind::Quad:
        out << "[" << g.nameOf(r.ch[0]) << " " << g.nameOf(r.ch[1]) << " ; " << g.nameOf(r.ch[2])
            << " " << g.nameOf(r.ch[3]) << "]";
        break;
    }
    out << "\n";
  }
  return out.str();
}

void writeGrammarFile(const Grammar& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << serializeGrammar(g);
  if (!out) throw Error("cannot write '" + path + "'");
}

}  // namespace mtdd
