#include "mtdd/linear_solver.hpp"

#include <algorithm>
#include <set>

namespace mtdd {

std::vector<Var> varIndex(const EquationSystem& s) {
  std::set<Var> vars;
  for (const Equation& e : s.eqs)
    for (const auto& [v, c] : e)
      if (c != 0) vars.insert(v);
  return {vars.begin(), vars.end()};
}

void standardize(EquationSystem& s) {
  for (Equation& e : s.eqs) {
    for (auto it = e.begin(); it != e.end();) {
      it->second = s.ring.canon(it->second);
      if (it->second == 0)
        it = e.erase(it);
      else
        ++it;
    }
  }
  std::erase_if(s.eqs, [](const Equation& e) { return e.empty(); });
}

namespace {

void divideByContent(Equation& e) {
  Int g = 0;
  for (const auto& [v, c] : e) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (g <= 1) return;
  for (auto& [v, c] : e) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
}

// r <- pivotCoeff * r - rCoeff * b, fraction-free; coefficients are taken by
// value because they usually live inside r
void eliminate(Equation& r, const Equation& b, const Int pivotCoeff, const Int rCoeff) {
  for (auto& term : r) term.second *= pivotCoeff;
  for (const auto& [v, c] : b) r[v] -= rCoeff * c;
  for (auto it = r.begin(); it != r.end();)
    it = it->second == 0 ? r.erase(it) : std::next(it);
  divideByContent(r);
}

}  // namespace

EquationSystem reduceZ(const EquationSystem& s) {
  if (s.ring.isModular()) throw ValidateError("integer reduction on a modular system");
  EquationSystem kept{s.ring, {}};
  std::vector<Equation> basis;  // echelon residues of the kept equations
  for (const Equation& original : s.eqs) {
    Equation r = original;
    for (auto it = r.begin(); it != r.end();) {
      it->second = s.ring.canon(it->second);
      it = it->second == 0 ? r.erase(it) : std::next(it);
    }
    for (const Equation& b : basis) {
      if (r.empty()) break;
      const Var pivot = b.begin()->first;
      auto hit = r.find(pivot);
      if (hit == r.end()) continue;
      eliminate(r, b, b.begin()->second, hit->second);
    }
    if (r.empty()) continue;  // rational combination of earlier equations
    kept.eqs.push_back(original);
    basis.push_back(std::move(r));
    std::sort(basis.begin(), basis.end(),
              [](const Equation& a, const Equation& b) { return a.begin()->first < b.begin()->first; });
  }
  return kept;
}

namespace {

std::size_t leftmost(const std::vector<Int>& row) {
  std::size_t c = 0;
  while (c < row.size() && row[c] == 0) ++c;
  return c;
}

// unit u with u * a == gcd(a, k) (mod k)
Int unitFor(const Int& a, const Int& k) {
  Int g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), k.get_mpz_t());
  const Int step = k / g;
  Int u = s;
  mpz_mod(u.get_mpz_t(), u.get_mpz_t(), k.get_mpz_t());
  while (true) {
    Int common;
    Int probe = u == 0 ? k : u;
    mpz_gcd(common.get_mpz_t(), probe.get_mpz_t(), k.get_mpz_t());
    if (common == 1) return u;
    u += step;
    mpz_mod(u.get_mpz_t(), u.get_mpz_t(), k.get_mpz_t());
  }
}

}  // namespace

std::vector<std::vector<Int>> howellForm(std::vector<std::vector<Int>> m, const Int& k) {
  if (k < 2) throw ValidateError("modulus must be at least 2");
  const Semiring ring = Semiring::modular(k);
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (const auto& row : m)
    if (row.size() != cols) throw ValidateError("ragged matrix");

  std::vector<std::vector<Int>> pool;
  for (auto& row : m) {
    for (Int& x : row) x = ring.canon(x);
    if (leftmost(row) < cols) pool.push_back(std::move(row));
  }

  std::vector<std::vector<Int>> result;
  for (std::size_t col = 0; col < cols; ++col) {
    // collect the rows whose leading entry sits in this column
    std::vector<std::vector<Int>> bucket;
    for (auto it = pool.begin(); it != pool.end();) {
      if (leftmost(*it) == col) {
        bucket.push_back(std::move(*it));
        it = pool.erase(it);
      } else {
        ++it;
      }
    }
    if (bucket.empty()) continue;

    std::vector<Int> row = std::move(bucket.back());
    bucket.pop_back();
    while (!bucket.empty()) {
      std::vector<Int> other = std::move(bucket.back());
      bucket.pop_back();
      const Int a = row[col], b = other[col];
      Int g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
      std::vector<Int> combined(cols), residue(cols);
      for (std::size_t j = 0; j < cols; ++j) {
        combined[j] = ring.canon(s * row[j] + t * other[j]);
        residue[j] = ring.canon((a / g) * other[j] - (b / g) * row[j]);
      }
      row = std::move(combined);
      if (leftmost(residue) < cols) pool.push_back(std::move(residue));
    }

    const Int u = unitFor(row[col], k);
    for (Int& x : row) x = ring.mul(x, u);

    // the pivot's annihilator scales the row into later columns; without it
    // the span of the result would be too small
    Int ann = k / row[col];
    std::vector<Int> stab(cols);
    for (std::size_t j = 0; j < cols; ++j) stab[j] = ring.mul(ann, row[j]);
    if (leftmost(stab) < cols) pool.push_back(std::move(stab));

    result.push_back(std::move(row));
  }

  // reduce entries above each pivot below the pivot itself
  for (std::size_t i = 0; i < result.size(); ++i) {
    const std::size_t c = leftmost(result[i]);
    const Int p = result[i][c];
    for (std::size_t q = 0; q < i; ++q) {
      Int factor = result[q][c] / p;
      if (factor == 0) continue;
      for (std::size_t j = 0; j < cols; ++j)
        result[q][j] = ring.canon(result[q][j] - factor * result[i][j]);
    }
  }
  return result;
}

EquationSystem reduceZk(const EquationSystem& s) {
  if (!s.ring.isModular()) throw ValidateError("modular reduction on an integer system");
  const std::vector<Var> vars = varIndex(s);
  std::vector<std::vector<Int>> m;
  for (const Equation& e : s.eqs) {
    std::vector<Int> row(vars.size(), 0);
    for (const auto& [v, c] : e) {
      auto it = std::lower_bound(vars.begin(), vars.end(), v);
      row[it - vars.begin()] = c;
    }
    m.push_back(std::move(row));
  }
  EquationSystem out{s.ring, {}};
  for (const auto& row : howellForm(std::move(m), s.ring.modulus())) {
    Equation e;
    for (std::size_t j = 0; j < vars.size(); ++j)
      if (row[j] != 0) e[vars[j]] = row[j];
    out.eqs.push_back(std::move(e));
  }
  return out;
}

EquationSystem reduceSystem(const EquationSystem& s) {
  return s.ring.isModular() ? reduceZk(s) : reduceZ(s);
}

}  // namespace mtdd
