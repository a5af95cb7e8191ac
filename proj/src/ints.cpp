#include "mtdd/ints.hpp"

namespace mtdd {

int ceilLog2(std::uint64_t n) {
  if (n <= 1) return 0;
  int t = 0;
  std::uint64_t m = n - 1;
  while (m != 0) {
    m >>= 1;
    ++t;
  }
  return t;
}

int magnitudeBits(const Int& v) {
  if (v == 0) return 0;
  Int a = abs(v);
  return static_cast<int>(mpz_sizeinbase(a.get_mpz_t(), 2));
}

Int pow2(unsigned long e) {
  Int r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
  return r;
}

bool bitOf(const Int& v, unsigned long b) {
  return mpz_tstbit(v.get_mpz_t(), b) != 0;
}

}  // namespace mtdd
