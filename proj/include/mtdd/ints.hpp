#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <string>

namespace mtdd {

using Int = mpz_class;

// smallest t with 2^t >= n; 0 for n <= 1
int ceilLog2(std::uint64_t n);

// ceil(log2(|v| + 1)); 0 for v = 0
int magnitudeBits(const Int& v);

Int pow2(unsigned long e);

// bit b (0 = least significant) of a nonnegative value
bool bitOf(const Int& v, unsigned long b);

}  // namespace mtdd
