#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "mtdd/errors.hpp"
#include "mtdd/ints.hpp"
#include "mtdd/semiring.hpp"

namespace mtdd {

enum class Dim : int { Vector = 1, Matrix = 2 };

using Var = std::uint32_t;
inline constexpr Var kNoVar = 0xffffffffu;

enum class RuleKind : std::uint8_t { Quad, Pair, Add, Const };

// One production. Quad children are row-major: tl, tr, bl, br.
struct Rule {
  RuleKind kind = RuleKind::Const;
  std::array<Var, 4> ch = {kNoVar, kNoVar, kNoVar, kNoVar};
  Int value = 0;

  static Rule quad(Var tl, Var tr, Var bl, Var br);
  static Rule pair(Var left, Var right);
  static Rule add(Var a, Var b);
  static Rule constant(Int v);

  bool operator==(const Rule& o) const {
    return kind == o.kind && ch == o.ch && value == o.value;
  }
};

struct RuleHash {
  std::size_t operator()(const Rule& r) const;
};

// Acyclic grammar with exactly one rule per variable. validate() computes
// heights; every operation expects validated inputs and returns validated
// outputs. A grammar whose reachable rules are all Add/Const (height 0) acts
// as a +-circuit.
class Grammar {
 public:
  Grammar(Semiring ring, Dim dim);

  const Semiring& ring() const { return ring_; }
  Dim dim() const { return dim_; }

  // declares the name if new; the rule may be attached later
  Var declare(const std::string& name);
  Var addRule(const std::string& name, Rule r);
  // reuses the first variable carrying an identical rule, else mints "v<i>"
  Var internRule(Rule r);
  void setStart(Var v);
  void setStart(const std::string& name);

  std::size_t varCount() const { return rules_.size(); }
  bool hasVar(const std::string& name) const { return byName_.count(name) != 0; }
  Var var(const std::string& name) const;
  const std::string& nameOf(Var v) const { return names_[v]; }
  bool hasRule(Var v) const { return hasRule_[v]; }
  const Rule& rule(Var v) const { return rules_[v]; }
  bool hasStart() const { return start_ != kNoVar; }
  Var start() const;

  void validate();
  bool validated() const { return validated_; }
  void requireValidated() const;
  int height(Var v) const { return heights_[v]; }
  int height() const { return heights_[start()]; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  // DFS preorder from v, children in rule order
  std::vector<Var> reachableFrom(Var v) const;

 private:
  Var fresh(const std::string& name);

  Semiring ring_;
  Dim dim_;
  std::vector<std::string> names_;
  std::vector<Rule> rules_;
  std::vector<bool> hasRule_;
  std::unordered_map<std::string, Var> byName_;
  std::unordered_map<Rule, Var, RuleHash> byRule_;
  std::vector<int> heights_;
  std::vector<std::string> warnings_;
  Var start_ = kNoVar;
  bool validated_ = false;
  std::uint64_t mintCounter_ = 0;
};

// sum over rules: Const c costs max(1, ceil(log2(|c|+1))), every other rule
// costs ceil(log2(number of variables))
std::uint64_t grammarSize(const Grammar& g);

struct MergeResult {
  Grammar merged;
  std::vector<Var> map1;  // var of g1 -> var of merged
  std::vector<Var> map2;  // var of g2 -> var of merged
};

// union grammar with g2 names renamed on collision; start is g1's start
MergeResult mergeDisjoint(const Grammar& g1, const Grammar& g2);

// copies the part of g reachable from a into out (same ring), renaming on
// collision; returns the copy of a
Var copyValueInto(Grammar& out, const Grammar& g, Var a);

Grammar parseGrammar(const std::string& text);
Grammar parseGrammarFile(const std::string& path);
std::string serializeGrammar(const Grammar& g);
void writeGrammarFile(const Grammar& g, const std::string& path);

}  // namespace mtdd
