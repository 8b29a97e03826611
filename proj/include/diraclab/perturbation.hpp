#pragma once

#include <optional>
#include <vector>

#include "diraclab/clifford.hpp"
#include "diraclab/linalg.hpp"

namespace diraclab {

inline constexpr double kAnticommuteTol = 1e-10;
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kProperTol = 1e-8;

// Linearization Z(x) = sum (x - basepoint)_j Z_j of a perturbation at a
// singular point, over a graded module. Each Z_j is Hermitian and odd for
// the grading.
struct LinearPerturbation {
  int n = 0;
  GradedModule module;
  std::vector<Matrix> zs;
  RealVector basepoint;
};

// True iff Z anticommutes with every Clifford generator of the module
// (the zeroth-order condition on Z D + D Z).
bool check_anticommutation(const GradedModule& module, const Matrix& z,
                           double tol = kAnticommuteTol);

struct ProperReport {
  bool is_proper = false;
  double c_lower = 0.0;   // inf of smallest singular value of Z(sigma)
  bool anticommutes = false;
  bool rank_ok = false;
  bool scalar_square = false;  // Z(x)^2 = q(x) 1 holds (c_lower then exact)
};

ProperReport check_proper(const LinearPerturbation& p, int samples = 1000,
                          std::uint64_t seed = kDefaultSeed);

// Detects Z_j Z_k + Z_k Z_j = 2 Q_jk 1 and returns Q if it holds.
std::optional<RealMatrix> scalar_square_form(const std::vector<Matrix>& zs,
                                             double tol = kHermitianTol);

// Even case: Z_j = gamma (x) phi_j with phi_j = (phi_j^+, (phi_j^+)^*);
// requires dim W^+ = dim W^-. `phis` are the maps phi_j^+ : W^+ -> W^-.
LinearPerturbation build_even(const CliffordRep& rep, const TwistSpec& twist,
                              const std::vector<Matrix>& phis);

// Odd case: Z_j = 1 (x) [[0, phi_j],[-phi_j, 0]] with skew-adjoint phi_j.
LinearPerturbation build_odd(const CliffordRep& rep, int dim_w_prime,
                             const std::vector<Matrix>& phis);

// Normal form y = sqrt(D) U (x - basepoint) in which the rescaled
// coefficients pairwise anticommute and square to the identity.
struct CoordinateNormalization {
  RealMatrix q;          // quadratic form, Z(x)^2 = (x^T q x) 1
  RealMatrix u;          // orthogonal, u q u^T diagonal
  RealVector d;          // positive eigenvalues of q
  std::vector<Matrix> zt;  // Zt_j Zt_k + Zt_k Zt_j = 2 delta_jk 1
};

CoordinateNormalization normalize(const LinearPerturbation& p);

// Even n: rank divisible by 2^(n/2+1), and by 2^n when singular points
// exist. Odd n: divisible by 2^((n+1)/2), and by 2^n when singular points
// exist.
bool check_rank_constraints(const LinearPerturbation& p,
                            bool has_singular_points);

}  // namespace diraclab
