#pragma once

#include <string>
#include <vector>

#include "diraclab/de_rham.hpp"
#include "diraclab/local_index.hpp"

namespace diraclab {

struct VectorFieldZero {
  std::string label;
  RealMatrix linearization;  // V_jk, invertible
};

struct VectorFieldSpec {
  int n = 0;  // even
  std::vector<VectorFieldZero> zeros;

  static VectorFieldSpec sphere_preset();  // two zeros, V = I each
  static VectorFieldSpec torus_preset();   // four zeros, diag(+-1, +-1)
};

struct PoincareHopfResult {
  std::vector<int> per_zero;
  long chi = 0;
};

// Per-zero index computed both as sign det V_jk and through the full de Rham
// pipeline (forms module, Z_V coefficients, discretization oracle); the two
// routes must agree.
PoincareHopfResult poincare_hopf(const VectorFieldSpec& spec);

// c(B2) c(B1) = c(B1_parallel - B1_perp) c(B2), and the reflection flips
// orientation in even dimensions.
bool commuting_lemma_check(const RealVector& b1, const RealVector& b2,
                           const CliffordRep& rep, double tol = 1e-12);

RealVector reflect_along(const RealVector& b1, const RealVector& b2);

struct PinSphereResult {
  std::vector<int> per_zero;  // axes 1..2m+1, two zeros per axis
  long total = 0;
};

// Indices of the zeros of beta = p(E_1)...p(E_{2m+1}) on S^{2m}: the
// vanishing factor is commuted to the front with reflection moves, each
// verified at the Clifford-matrix level.
PinSphereResult pin_sphere_indices(int m);

struct PinZeroSpec {
  RealMatrix v1_linearization;      // nondegenerate linear factor
  std::vector<RealVector> tail;     // constant nonzero factors
};

// Randomized alternative factorizations (canceling even products appended,
// the vanishing factor shuffled through reflection moves) must extract the
// same index.
bool pin_index_well_defined_check(const PinZeroSpec& spec, int trials,
                                  std::uint64_t seed = kDefaultSeed);

struct SubmanifoldReport {
  double hermitian_residual = 0.0;
  double min_singular_value = 0.0;
  double anticommute_residual = 0.0;
  bool ok = false;
  long index = 0;
};

// Z = i^{(r+1)/2} c(omega) for the vertical volume element of an odd-rank
// normal bundle: Hermitian, invertible, anticommutes with the tangential
// action, so the index vanishes (empty singular set).
SubmanifoldReport submanifold_vanishing(int tangent_dim, int normal_rank,
                                        double omega_scale);

}  // namespace diraclab
