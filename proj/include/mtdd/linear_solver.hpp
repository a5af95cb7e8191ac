#pragma once

#include <map>
#include <vector>

#include "mtdd/grammar.hpp"

namespace mtdd {

// sparse homogeneous equation: sum of coeff * variable = 0
using Equation = std::map<Var, Int>;

struct EquationSystem {
  Semiring ring;
  std::vector<Equation> eqs;
};

// sorted distinct variables occurring with nonzero coefficient
std::vector<Var> varIndex(const EquationSystem& s);

// canonicalize coefficients, drop zero terms and empty equations
void standardize(EquationSystem& s);

// keeps a maximal subset of equations independent over the rationals; every
// dropped equation is a rational combination of kept ones
EquationSystem reduceZ(const EquationSystem& s);

// Howell normal form of a residue matrix mod k: row span preserved, at most
// one pivot row per column, pivots divide k, entries above pivots reduced
std::vector<std::vector<Int>> howellForm(std::vector<std::vector<Int>> m, const Int& k);

// replaces the system by equations read off the Howell form of its matrix
EquationSystem reduceZk(const EquationSystem& s);

// reduceZ over the integers, reduceZk over a modular ring
EquationSystem reduceSystem(const EquationSystem& s);

}  // namespace mtdd
