#pragma once

#include <array>
#include <string>
#include <vector>

#include "mtdd/grammar.hpp"

namespace mtdd {

// Deterministic automaton over {0,1}x{0,1} whose states are arranged in
// layers 0..depth; exactly one state in layer 0, exactly two in the last
// layer, one of them final. Words are read as (row bit, col bit) pairs.
// Symbols are encoded as 2 * rowBit + colBit.
struct LayeredDfa {
  std::vector<std::vector<std::string>> stateNames;       // [layer][state]
  std::vector<std::vector<std::array<int, 4>>> next;      // [layer][state][sym]
  int finalState = 0;                                     // index in last layer

  int depth() const { return static_cast<int>(stateNames.size()) - 1; }
  void check() const;  // throws ValidateError on broken structure
  bool accepts(const std::vector<int>& syms) const;
};

LayeredDfa parseDfa(const std::string& text);
LayeredDfa parseDfaFile(const std::string& path);
std::string serializeDfa(const LayeredDfa& d);

// graph adjacency matrix of the DFA: entry (u+1, v+1) = 1 iff the convolution
// of the row word u and column word v is accepted
Grammar dfaToMtdd(const LayeredDfa& d);

// inverse direction; requires an addition-free grammar with 0/1 terminals
LayeredDfa mtddToDfa(const Grammar& g, Var a);

struct TuringMachine {
  enum class Move { L, R, S };
  struct Step {
    int state;
    int write;  // tape symbol
    Move move;
  };

  std::vector<std::string> states;
  std::vector<std::string> tapeSymbols;
  int initial = 0;
  int accepting = 0;
  int blank = 0;
  std::vector<int> inputSymbols;                   // subset of tapeSymbols
  std::vector<std::vector<std::vector<Step>>> delta;  // [state][symbol]

  bool deterministic() const;
  void check() const;  // throws ValidateError on broken structure
  int stateIndex(const std::string& name) const;
  int tapeIndex(const std::string& name) const;
};

TuringMachine parseTm(const std::string& text);
TuringMachine parseTmFile(const std::string& path);

// A configuration of tape length L is a word of L+1 symbols: tape cells with
// the state symbol immediately left of the scanned cell. Symbols carry the
// codes used by the bit encoding: state q -> 1 + q, tape t -> 1 + |Q| + t.
using TmWord = std::vector<int>;

int encodingWidth(const TuringMachine& m);  // bits per symbol, code 0 unused
int stateCode(const TuringMachine& m, int state);
int tapeCode(const TuringMachine& m, int tapeSymbol);
TmWord initialWord(const TuringMachine& m, const std::vector<int>& input, int tapeLen);
TmWord acceptingWord(const TuringMachine& m, int tapeLen);
std::vector<bool> wordBits(const TuringMachine& m, const TmWord& w);
Int wordIndex(const TuringMachine& m, const TmWord& w);  // 1-based node index

// layered DFA accepting exactly the convolutions of one-step configuration
// pairs c1, c2 with c1 |- c2, at bit level (depth = width * (tapeLen + 1))
LayeredDfa tmStepDfa(const TuringMachine& m, int tapeLen);

enum class ReductionKind { Det, Count };

// adjacency grammar of the step graph extended with the entry edge into the
// initial configuration and the exit edge out of the accepting one; Det also
// puts a loop on every node except the all-zero word
Grammar reductionGraph(const TuringMachine& m, ReductionKind kind,
                       const std::vector<std::string>& input, int tapeLen);

}  // namespace mtdd
