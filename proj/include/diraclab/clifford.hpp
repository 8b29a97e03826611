#pragma once

#include <string>
#include <vector>

#include "diraclab/linalg.hpp"

namespace diraclab {

// Irreducible complex Clifford representation of R^n with the convention
// c(v)c(w) + c(w)c(v) = -2<v,w> and c(v) skew-Hermitian.
struct CliffordRep {
  int n = 0;
  int dim = 0;  // 2^floor(n/2)
  std::vector<Matrix> generators;
  Matrix chirality;  // i^k g_1...g_n, squares to the identity
};

// Residuals of the defining relations, all of which should vanish.
struct RepInvariantReport {
  double clifford = 0.0;        // |g_j g_k + g_k g_j + 2 delta_jk|
  double skew_adjoint = 0.0;    // |g_j + g_j^*|
  double chirality_def = 0.0;   // |gamma - i^k g_1...g_n|
  double chirality_square = 0.0;
  double chirality_parity = 0.0;  // anti/commutation with the generators
  double max() const;
};

// Recursive tensor-product construction. The generator order and the basis
// are fixed, so repeated calls give identical matrices. For even n the basis
// is sorted so that the chirality operator is diag(I, -I); for odd n the
// construction is normalized so that the chirality element acts as +1, and
// this output is taken as the preferred representation c^+ (c^- = -c^+).
CliffordRep build_irreducible_rep(int n);

RepInvariantReport check_rep_invariants(const CliffordRep& rep);

enum class Parity { kEven, kOdd };

// Twisting data W for E = S (x) W.
struct TwistSpec {
  Parity parity = Parity::kEven;
  int dim_w_plus = 0;
  int dim_w_minus = 0;
  int dim_w_prime = 0;

  static TwistSpec even(int w_plus, int w_minus);
  static TwistSpec odd(int w_prime);
  int total_rank(int n) const;
};

// Z2-graded Clifford module in the fixed block convention: E^+ occupies the
// leading block and the grading involution is diag(I, -I).
struct GradedModule {
  int n = 0;
  int rank_plus = 0;
  int rank_minus = 0;
  std::vector<Matrix> action;  // odd, skew-Hermitian generators on E

  int rank() const { return rank_plus + rank_minus; }
  Matrix grading() const;

  // Blocks of an odd endomorphism X = [[0, X^{+-}],[X^{-+}, 0]].
  Matrix block_minus_plus(const Matrix& x) const;  // E^+ -> E^-
  Matrix block_plus_minus(const Matrix& x) const;  // E^- -> E^+
  Matrix block_plus_plus(const Matrix& x) const;
  Matrix block_minus_minus(const Matrix& x) const;
};

double module_invariant_residual(const GradedModule& m);

// E = S (x) W with the graded action of the classification lemma. Even n:
// E^+ = (S^+ (x) W^+) + (S^- (x) W^-). Odd n: E^± = S (x) {(w, ±w)}, which
// turns c^+(v) (x) diag(1,-1) into [[0, c^+(v)],[c^+(v), 0]] in the graded
// basis.
GradedModule build_graded_module(const CliffordRep& rep, const TwistSpec& twist);

// Basis change used by build_graded_module in the even case: perm[i] is the
// graded-basis position of product-basis index i of S (x) W.
std::vector<int> product_to_graded_permutation(const CliffordRep& rep,
                                               const TwistSpec& twist);

Matrix permute_basis(const Matrix& a, const std::vector<int>& perm);

// True iff r is a positive multiple of 2^floor((k-1)/2).
bool admissible_rank(int k, int r);

// k matrices of size m*2^floor((k-1)/2) whose pencil sum(x_j L_j) is
// invertible for every x != 0.
std::vector<Matrix> build_invertible_pencil(int k, int m);

// Nullity of the linear system {Z : Z g_j + g_j Z = 0 for all j} over the
// matrix space, with and without the constraint that Z is odd for the
// grading. For an irreducible even representation the graded system has
// only the zero solution and the ungraded one is spanned by the chirality
// operator.
struct NoPerturbationReport {
  int n = 0;
  int nullity_graded = 0;
  int nullity_ungraded = 0;
  double chirality_alignment = 0.0;  // overlap of the ungraded solution with gamma
};

NoPerturbationReport no_perturbation_witness(const CliffordRep& rep);

// Same system on a twisted module with action c(v) (x) 1 and grading
// gamma (x) 1 (the S (x) W situation).
NoPerturbationReport no_perturbation_witness_twisted(const CliffordRep& rep,
                                                     int w_dim);

int solve_anticommutant_nullity(const std::vector<Matrix>& generators,
                                const Matrix* grading, double tol,
                                Matrix* sample_solution = nullptr);

}  // namespace diraclab
