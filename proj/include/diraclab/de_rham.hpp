#pragma once

#include "diraclab/perturbation.hpp"

namespace diraclab {

// Complexified exterior algebra of R^n as a graded Clifford module: basis
// dx_I over subsets I, even-degree forms in the leading block, Clifford
// action l(e_j) = dx_j ^ - iota_j.
GradedModule de_rham_module(int n);

// Index of the basis form dx_I (I as a bitmask) in the module basis.
int de_rham_basis_index(int n, unsigned mask);

// Z_V = V^flat ^ + V-contraction for the linearized field V(x)_k =
// sum_j x_j V_jk: the coefficient matrices Z_j = sum_k V_jk (dx_k ^ + iota_k).
std::vector<Matrix> de_rham_perturbation(const RealMatrix& v_jk);

}  // namespace diraclab
