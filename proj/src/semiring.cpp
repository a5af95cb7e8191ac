#include "mtdd/semiring.hpp"

namespace mtdd {

Semiring Semiring::integers() { return Semiring(std::nullopt); }

Semiring Semiring::modular(Int k) {
  if (k < 2) throw ValidateError("modulus must be at least 2, got " + k.get_str());
  return Semiring(std::move(k));
}

const Int& Semiring::modulus() const {
  if (!mod_) throw ValidateError("modulus() on the integer ring");
  return *mod_;
}

Int Semiring::canon(Int v) const {
  if (!mod_) return v;
  Int r;
  mpz_mod(r.get_mpz_t(), v.get_mpz_t(), mod_->get_mpz_t());
  return r;
}

std::string Semiring::describe() const {
  return mod_ ? "Zmod " + mod_->get_str() : "Z";
}

}  // namespace mtdd
