#pragma once

#include <optional>
#include <string>

#include "mtdd/errors.hpp"
#include "mtdd/ints.hpp"

namespace mtdd {

// Ring of matrix entries: the integers, or the integers mod k (k >= 2).
// Modular values are kept as canonical residues in [0, k).
class Semiring {
 public:
  static Semiring integers();
  static Semiring modular(Int k);

  bool isModular() const { return mod_.has_value(); }
  const Int& modulus() const;

  Int canon(Int v) const;
  Int add(const Int& a, const Int& b) const { return canon(a + b); }
  Int sub(const Int& a, const Int& b) const { return canon(a - b); }
  Int mul(const Int& a, const Int& b) const { return canon(a * b); }
  Int neg(const Int& a) const { return canon(-a); }

  std::string describe() const;

  bool operator==(const Semiring& o) const { return mod_ == o.mod_; }
  bool operator!=(const Semiring& o) const { return !(*this == o); }

 private:
  explicit Semiring(std::optional<Int> mod) : mod_(std::move(mod)) {}
  std::optional<Int> mod_;
};

}  // namespace mtdd
