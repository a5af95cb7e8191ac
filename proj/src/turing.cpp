#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "mtdd/automata.hpp"
#include "mtdd/errors.hpp"
#include "mtdd/ints.hpp"

namespace mtdd {

bool TuringMachine::deterministic() const {
  for (const auto& row : delta)
    for (const auto& steps : row)
      if (steps.size() > 1) return false;
  return true;
}

void TuringMachine::check() const {
  if (states.empty()) throw ValidateError("machine has no states");
  if (tapeSymbols.empty()) throw ValidateError("machine has no tape symbols");
  auto stateOk = [&](int q) { return q >= 0 && q < static_cast<int>(states.size()); };
  auto tapeOk = [&](int t) { return t >= 0 && t < static_cast<int>(tapeSymbols.size()); };
  if (!stateOk(initial) || !stateOk(accepting)) throw ValidateError("initial or accepting state out of range");
  if (!tapeOk(blank)) throw ValidateError("blank symbol out of range");
  for (int t : inputSymbols)
    if (!tapeOk(t)) throw ValidateError("input symbol out of range");
  if (delta.size() != states.size()) throw ValidateError("transition table shape mismatch");
  for (const auto& row : delta) {
    if (row.size() != tapeSymbols.size()) throw ValidateError("transition table shape mismatch");
    for (const auto& steps : row)
      for (const Step& s : steps)
        if (!stateOk(s.state) || !tapeOk(s.write)) throw ValidateError("transition target out of range");
  }
}

int TuringMachine::stateIndex(const std::string& name) const {
  auto it = std::find(states.begin(), states.end(), name);
  if (it == states.end()) throw ValidateError("unknown state '" + name + "'");
  return static_cast<int>(it - states.begin());
}

int TuringMachine::tapeIndex(const std::string& name) const {
  auto it = std::find(tapeSymbols.begin(), tapeSymbols.end(), name);
  if (it == tapeSymbols.end()) throw ValidateError("unknown tape symbol '" + name + "'");
  return static_cast<int>(it - tapeSymbols.begin());
}

namespace {

std::vector<std::string> splitTokens(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    char c = i < text.size() ? text[i] : '\n';
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      c = '\n';
    }
    if (std::isspace(static_cast<unsigned char>(c)) || c == ';') {
      if (!cur.empty()) {
        out.push_back(cur);
        cur.clear();
      }
      if (c == ';') out.push_back(";");
    } else {
      cur += c;
    }
  }
  return out;
}

}  // namespace

TuringMachine parseTm(const std::string& text) {
  const std::vector<std::string> tok = splitTokens(text);
  TuringMachine m;
  std::string initialName, acceptName, blankName;
  std::vector<std::string> inputNames;
  struct RawStep {
    std::string from, read, to, write, move;
  };
  std::vector<RawStep> raw;
  bool sawStates = false, sawTape = false, sawInitial = false, sawAccept = false, sawBlank = false;

  std::size_t i = 0;
  auto upTo = [&](const char* what) {
    std::vector<std::string> names;
    while (i < tok.size() && tok[i] != ";") names.push_back(tok[i++]);
    if (i == tok.size()) throw ParseError(std::string("unterminated '") + what + "' declaration");
    ++i;  // consume ';'
    if (names.empty()) throw ParseError(std::string("empty '") + what + "' declaration");
    return names;
  };
  while (i < tok.size()) {
    const std::string& t = tok[i];
    if (t == "states") {
      ++i;
      m.states = upTo("states");
      sawStates = true;
    } else if (t == "tape") {
      ++i;
      m.tapeSymbols = upTo("tape");
      sawTape = true;
    } else if (t == "input") {
      ++i;
      inputNames = upTo("input");
    } else if (t == "initial") {
      ++i;
      initialName = upTo("initial").at(0);
      sawInitial = true;
    } else if (t == "accept") {
      ++i;
      acceptName = upTo("accept").at(0);
      sawAccept = true;
    } else if (t == "blank") {
      ++i;
      blankName = upTo("blank").at(0);
      sawBlank = true;
    } else {
      // transition: from read -> to write move
      if (i + 4 >= tok.size() || tok[i + 2] != "->")
        throw ParseError("malformed transition near '" + t + "'");
      raw.push_back({tok[i], tok[i + 1], tok[i + 3], tok[i + 4], i + 5 < tok.size() ? tok[i + 5] : ""});
      if (raw.back().move != "L" && raw.back().move != "R" && raw.back().move != "S")
        throw ParseError("transition move must be L, R or S near '" + t + "'");
      i += 6;
    }
  }
  if (!sawStates) throw ParseError("missing states declaration");
  if (!sawTape) throw ParseError("missing tape declaration");
  if (!sawInitial) throw ParseError("missing initial declaration");
  if (!sawAccept) throw ParseError("missing accept declaration");
  if (!sawBlank) throw ParseError("missing blank declaration");

  auto checkDistinct = [](const std::vector<std::string>& names, const char* what) {
    std::unordered_set<std::string> seen;
    for (const std::string& n : names)
      if (!seen.insert(n).second) throw ParseError(std::string("repeated ") + what + " '" + n + "'");
  };
  checkDistinct(m.states, "state");
  checkDistinct(m.tapeSymbols, "tape symbol");
  for (const std::string& s : m.states)
    if (std::find(m.tapeSymbols.begin(), m.tapeSymbols.end(), s) != m.tapeSymbols.end())
      throw ParseError("'" + s + "' is both a state and a tape symbol");

  try {
    m.initial = m.stateIndex(initialName);
    m.accepting = m.stateIndex(acceptName);
    m.blank = m.tapeIndex(blankName);
    for (const std::string& n : inputNames) m.inputSymbols.push_back(m.tapeIndex(n));
    if (inputNames.empty()) {
      for (int t = 0; t < static_cast<int>(m.tapeSymbols.size()); ++t)
        if (t != m.blank) m.inputSymbols.push_back(t);
    }
    m.delta.assign(m.states.size(), std::vector<std::vector<TuringMachine::Step>>(m.tapeSymbols.size()));
    for (const RawStep& r : raw) {
      TuringMachine::Step s;
      s.state = m.stateIndex(r.to);
      s.write = m.tapeIndex(r.write);
      s.move = r.move == "L"   ? TuringMachine::Move::L
               : r.move == "R" ? TuringMachine::Move::R
                               : TuringMachine::Move::S;
      m.delta[m.stateIndex(r.from)][m.tapeIndex(r.read)].push_back(s);
    }
  } catch (const ValidateError& e) {
    throw ParseError(e.what());
  }
  m.check();
  return m;
}

TuringMachine parseTmFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parseTm(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

int encodingWidth(const TuringMachine& m) {
  return static_cast<int>(ceilLog2(m.states.size() + m.tapeSymbols.size() + 1));
}

int stateCode(const TuringMachine& m, int state) {
  if (state < 0 || state >= static_cast<int>(m.states.size()))
    throw ValidateError("state out of range");
  return 1 + state;
}

int tapeCode(const TuringMachine& m, int tapeSymbol) {
  if (tapeSymbol < 0 || tapeSymbol >= static_cast<int>(m.tapeSymbols.size()))
    throw ValidateError("tape symbol out of range");
  return 1 + static_cast<int>(m.states.size()) + tapeSymbol;
}

TmWord initialWord(const TuringMachine& m, const std::vector<int>& input, int tapeLen) {
  if (static_cast<int>(input.size()) > tapeLen)
    throw ValidateError("input longer than the tape");
  TmWord w;
  w.reserve(tapeLen + 1);
  w.push_back(stateCode(m, m.initial));
  for (int t : input) w.push_back(tapeCode(m, t));
  for (int i = static_cast<int>(input.size()); i < tapeLen; ++i) w.push_back(tapeCode(m, m.blank));
  return w;
}

TmWord acceptingWord(const TuringMachine& m, int tapeLen) {
  TmWord w(tapeLen + 1, tapeCode(m, m.blank));
  w[0] = stateCode(m, m.accepting);
  return w;
}

std::vector<bool> wordBits(const TuringMachine& m, const TmWord& w) {
  const int k = encodingWidth(m);
  std::vector<bool> bits;
  bits.reserve(w.size() * k);
  for (int code : w)
    for (int b = k - 1; b >= 0; --b) bits.push_back((code >> b) & 1);
  return bits;
}

Int wordIndex(const TuringMachine& m, const TmWord& w) {
  Int idx = 0;
  for (bool b : wordBits(m, w)) idx = 2 * idx + (b ? 1 : 0);
  return idx + 1;
}

}  // namespace mtdd
