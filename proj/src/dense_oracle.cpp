#include "mtdd/dense_oracle.hpp"

#include <map>
#include <optional>

namespace mtdd {

DenseMatrix densify(const Grammar& g, Var a, int heightCap) {
  g.requireValidated();
  if (g.height(a) > heightCap)
    throw CapError("value of height " + std::to_string(g.height(a)) +
                   " exceeds the dense cap " + std::to_string(heightCap));
  const Semiring& ring = g.ring();
  std::vector<std::optional<DenseMatrix>> memo(g.varCount());

  // explicit postorder so shared children are filled before any parent
  std::vector<std::pair<Var, bool>> stack{{a, false}};
  while (!stack.empty()) {
    auto [v, ready] = stack.back();
    stack.pop_back();
    if (memo[v]) continue;
    const Rule& r = g.rule(v);
    const std::size_t arity = r.kind == RuleKind::Quad ? 4
                              : r.kind == RuleKind::Const ? 0
                                                          : 2;
    if (!ready && arity > 0) {
      stack.emplace_back(v, true);
      for (std::size_t i = arity; i-- > 0;) stack.emplace_back(r.ch[i], false);
      continue;
    }
    switch (r.kind) {
      case RuleKind::Const: {
        DenseMatrix m(1, 1);
        m.at(0, 0) = r.value;
        memo[v] = std::move(m);
        break;
      }
      case RuleKind::Add: {
        const DenseMatrix& x = *memo[r.ch[0]];
        const DenseMatrix& y = *memo[r.ch[1]];
        DenseMatrix m(x.rows(), x.cols());
        for (std::size_t i = 0; i < x.rows(); ++i)
          for (std::size_t j = 0; j < x.cols(); ++j) m.at(i, j) = ring.add(x.at(i, j), y.at(i, j));
        memo[v] = std::move(m);
        break;
      }
      case RuleKind::Pair: {
        const DenseMatrix& x = *memo[r.ch[0]];
        const DenseMatrix& y = *memo[r.ch[1]];
        DenseMatrix m(1, x.cols() * 2);
        for (std::size_t j = 0; j < x.cols(); ++j) {
          m.at(0, j) = x.at(0, j);
          m.at(0, x.cols() + j) = y.at(0, j);
        }
        memo[v] = std::move(m);
        break;
      }
      case RuleKind::Quad: {
        const std::size_t s = memo[r.ch[0]]->rows();
        DenseMatrix m(2 * s, 2 * s);
        for (int b = 0; b < 4; ++b) {
          const DenseMatrix& c = *memo[r.ch[b]];
          const std::size_t ro = (b / 2) * s, co = (b % 2) * s;
          for (std::size_t i = 0; i < s; ++i)
            for (std::size_t j = 0; j < s; ++j) m.at(ro + i, co + j) = c.at(i, j);
        }
        memo[v] = std::move(m);
        break;
      }
    }
  }
  return *memo[a];
}

Int denseDet(DenseMatrix m, const Semiring& ring) {
  if (m.rows() != m.cols()) throw ValidateError("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return ring.canon(1);

  int sign = 1;
  Int prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::size_t pivot = k;
    while (pivot < n && m.at(pivot, k) == 0) ++pivot;
    if (pivot == n) return ring.canon(0);
    if (pivot != k) {
      for (std::size_t j = k; j < n; ++j) swap(m.at(pivot, j), m.at(k, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Int t = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
        mpz_divexact(m.at(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      m.at(i, k) = 0;
    }
    prev = m.at(k, k);
  }
  return ring.canon(sign < 0 ? Int(-m.at(n - 1, n - 1)) : m.at(n - 1, n - 1));
}

DenseMatrix denseMul(const DenseMatrix& a, const DenseMatrix& b, const Semiring& ring) {
  if (a.cols() != b.rows()) throw ValidateError("dense product shape mismatch");
  DenseMatrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a.at(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        r.at(i, j) = ring.add(r.at(i, j), ring.mul(a.at(i, k), b.at(k, j)));
    }
  return r;
}

DenseMatrix densePow(const DenseMatrix& a, unsigned n, const Semiring& ring) {
  if (a.rows() != a.cols()) throw ValidateError("dense power of a non-square matrix");
  DenseMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) r.at(i, i) = ring.canon(1);
  for (unsigned t = 0; t < n; ++t) r = denseMul(r, a, ring);
  return r;
}

namespace {

struct TmConfig {
  int qpos;               // 0..tapeLen, state symbol position in the word
  int state;
  std::vector<int> tape;  // tapeLen cells

  TmWord word(const TuringMachine& m) const {
    TmWord w;
    w.reserve(tape.size() + 1);
    for (int i = 0; i < qpos; ++i) w.push_back(tapeCode(m, tape[i]));
    w.push_back(stateCode(m, state));
    for (std::size_t i = qpos; i < tape.size(); ++i) w.push_back(tapeCode(m, tape[i]));
    return w;
  }
};

template <typename Fn>
void forEachConfig(const TuringMachine& m, int tapeLen, Fn fn) {
  const int nt = static_cast<int>(m.tapeSymbols.size());
  std::vector<int> tape(tapeLen, 0);
  while (true) {
    for (int qpos = 0; qpos <= tapeLen; ++qpos)
      for (std::size_t q = 0; q < m.states.size(); ++q)
        fn(TmConfig{qpos, static_cast<int>(q), tape});
    int i = 0;
    while (i < tapeLen && tape[i] == nt - 1) tape[i++] = 0;
    if (i == tapeLen) break;
    ++tape[i];
  }
}

std::vector<TmConfig> successors(const TuringMachine& m, const TmConfig& c) {
  std::vector<TmConfig> out;
  const int tapeLen = static_cast<int>(c.tape.size());
  if (c.qpos >= tapeLen) return out;  // no scanned cell
  const int scanned = c.tape[c.qpos];
  for (const TuringMachine::Step& s : m.delta[c.state][scanned]) {
    TmConfig n = c;
    n.state = s.state;
    n.tape[c.qpos] = s.write;
    switch (s.move) {
      case TuringMachine::Move::S:
        break;
      case TuringMachine::Move::R:
        n.qpos = c.qpos + 1;
        break;
      case TuringMachine::Move::L:
        if (c.qpos == 0) continue;  // would fall off the left end
        n.qpos = c.qpos - 1;
        break;
    }
    out.push_back(std::move(n));
  }
  return out;
}

}  // namespace

std::vector<std::pair<TmWord, TmWord>> simulateTm(const TuringMachine& m, int tapeLen) {
  m.check();
  if (tapeLen < 1) throw ValidateError("tape length must be at least 1");
  std::vector<std::pair<TmWord, TmWord>> edges;
  forEachConfig(m, tapeLen, [&](const TmConfig& c) {
    for (const TmConfig& n : successors(m, c)) edges.emplace_back(c.word(m), n.word(m));
  });
  return edges;
}

Int countAcceptingPaths(const TuringMachine& m, const std::vector<int>& input, int tapeLen,
                        unsigned length) {
  const TmWord w0 = initialWord(m, input, tapeLen);
  const TmWord wf = acceptingWord(m, tapeLen);

  std::map<TmWord, std::size_t> index;
  std::vector<TmWord> words;
  forEachConfig(m, tapeLen, [&](const TmConfig& c) {
    TmWord w = c.word(m);
    if (index.emplace(w, words.size()).second) words.push_back(std::move(w));
  });
  std::vector<std::vector<std::size_t>> out(words.size());
  for (const auto& [from, to] : simulateTm(m, tapeLen)) out[index.at(from)].push_back(index.at(to));

  std::vector<Int> cur(words.size(), 0);
  cur[index.at(w0)] = 1;
  for (unsigned t = 0; t < length; ++t) {
    std::vector<Int> nxt(words.size(), 0);
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (cur[i] == 0) continue;
      for (std::size_t j : out[i]) nxt[j] += cur[i];
    }
    cur = std::move(nxt);
  }
  return cur[index.at(wf)];
}

bool bruteForceSat(const Cnf& c) {
  if (c.numVars > 20) throw ValidateError("brute-force satisfiability is capped at 20 variables");
  const std::uint64_t total = std::uint64_t(1) << c.numVars;
  for (std::uint64_t r = 0; r < total; ++r) {
    bool all = true;
    for (const Clause& cl : c.clauses)
      if (!clauseSatisfied(cl, c.numVars, r)) {
        all = false;
        break;
      }
    if (all) return true;
  }
  return false;
}

}  // namespace mtdd
