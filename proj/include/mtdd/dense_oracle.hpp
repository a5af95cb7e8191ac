#pragma once

#include <utility>
#include <vector>

#include "mtdd/automata.hpp"
#include "mtdd/generators.hpp"
#include "mtdd/grammar.hpp"

namespace mtdd {

inline constexpr int kDefaultDenseCap = 10;

// exact row-major matrix; vectors are a single row
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Int& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Int& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  bool operator==(const DenseMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Int> a_;
};

// full expansion of val(a); refuses heights above the cap
DenseMatrix densify(const Grammar& g, Var a, int heightCap = kDefaultDenseCap);

// fraction-free elimination over the integers; modular rings reduce at the end
Int denseDet(DenseMatrix m, const Semiring& ring);

DenseMatrix denseMul(const DenseMatrix& a, const DenseMatrix& b, const Semiring& ring);
DenseMatrix densePow(const DenseMatrix& a, unsigned n, const Semiring& ring);

// all one-step configuration pairs of the machine at the given tape length,
// computed by direct simulation
std::vector<std::pair<TmWord, TmWord>> simulateTm(const TuringMachine& m, int tapeLen);

// number of accepting runs with exactly `length` steps, by dynamic programming
Int countAcceptingPaths(const TuringMachine& m, const std::vector<int>& input, int tapeLen,
                        unsigned length);

// exhaustive satisfiability check, at most 20 variables
bool bruteForceSat(const Cnf& c);

}  // namespace mtdd
