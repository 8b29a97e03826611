// shared helpers for the test suites: seeded random instances of proper
// anticommuting perturbations, used by the oracle-agreement tests

#pragma once

#include <vector>

#include "diraclab/de_rham.hpp"
#include "diraclab/local_index.hpp"
#include "diraclab/perturbation.hpp"

namespace diraclab::testing {

// Random proper anticommuting instance on a rank-(2 or 4...) module over
// R^n, n in {1, 2, 3}. The raw coefficients are a random invertible real
// mixing of an anticommuting involution family, conjugated by a random
// graded unitary, so both the normalization path and both oracles get
// exercised on non-canonical bases.
inline LinearPerturbation random_proper_instance(int n, int variant,
                                                 std::uint64_t seed) {
  Rng rng(seed);
  LinearPerturbation p;
  p.n = n;
  p.basepoint = RealVector::Zero(n);

  if (n == 1) {
    const CliffordRep rep = build_irreducible_rep(1);
    const int w = 1 + variant % 4;  // rank 2w <= 8
    // phi = i H with H a random Hermitian involution
    const Matrix u = rng.unitary(w);
    Matrix d = Matrix::Zero(w, w);
    for (int i = 0; i < w; ++i) d(i, i) = rng.uniform() < 0.5 ? 1.0 : -1.0;
    const Matrix phi = Complex(0, 1) * (u * d * u.adjoint());
    p = build_odd(rep, w, {phi});
  } else if (n == 2) {
    const CliffordRep rep = build_irreducible_rep(2);
    const int w = 1 + variant % 2;  // module rank 4 or 8
    std::vector<Matrix> phis;
    if (w == 1) {
      // any complex pair that is R-linearly independent
      for (int j = 0; j < 2; ++j) {
        Matrix phi(1, 1);
        phi(0, 0) = Complex(rng.gaussian(), rng.gaussian());
        phis.push_back(phi);
      }
      // retry until the pencil is honestly invertible
      while (std::abs((phis[0](0, 0) * std::conj(phis[1](0, 0))).imag()) < 0.3) {
        phis[1](0, 0) = Complex(rng.gaussian(), rng.gaussian());
      }
    } else {
      // quaternion-type pencil: phi_j = a_j 1 + b_j i sigma1 + ...
      Matrix basis[4];
      basis[0] = Matrix::Identity(2, 2);
      basis[1] = Matrix::Zero(2, 2);
      basis[1] << 0, Complex(0, 1), Complex(0, 1), 0;
      basis[2] = Matrix::Zero(2, 2);
      basis[2] << 0, 1, -1, 0;
      basis[3] = Matrix::Zero(2, 2);
      basis[3] << Complex(0, 1), 0, 0, Complex(0, -1);
      RealMatrix mix;
      do {
        mix = rng.real_matrix(2, 4);
      } while ((mix * mix.transpose()).determinant() < 0.3);
      for (int j = 0; j < 2; ++j) {
        Matrix phi = Matrix::Zero(2, 2);
        for (int b = 0; b < 4; ++b) phi += mix(j, b) * basis[b];
        phis.push_back(phi);
      }
    }
    p = build_even(rep, TwistSpec::even(w, w), phis);
  } else {
    const CliffordRep rep = build_irreducible_rep(3);
    // phi_j = i sigma_j (+) -i sigma_j on W' = C^4: the two blocks carry
    // opposite local indices, the globally consistent configuration
    Matrix s1(2, 2), s2(2, 2), s3(2, 2);
    s1 << 0, 1, 1, 0;
    s2 << 0, Complex(0, -1), Complex(0, 1), 0;
    s3 << 1, 0, 0, -1;
    const Complex i(0, 1);
    const Matrix w_rot = rng.unitary(4);
    std::vector<Matrix> phis;
    for (const Matrix& s : {s1, s2, s3}) {
      Matrix paired = Matrix::Zero(4, 4);
      paired.block(0, 0, 2, 2) = i * s;
      paired.block(2, 2, 2, 2) = -i * s;
      phis.push_back(w_rot * paired * w_rot.adjoint());
    }
    p = build_odd(rep, 4, phis);
  }

  // random orthogonal coordinate mixing with scales: exercises normalize()
  const RealMatrix o = rng.orthogonal(n);
  RealVector scales(n);
  for (int j = 0; j < n; ++j) scales(j) = 0.5 + rng.uniform();
  std::vector<Matrix> mixed;
  for (int j = 0; j < n; ++j) {
    Matrix z = Matrix::Zero(p.module.rank(), p.module.rank());
    for (int k = 0; k < n; ++k) z += o(j, k) * scales(k) * p.zs[k];
    mixed.push_back(z);
  }
  p.zs = mixed;

  // graded unitary change of basis
  const Matrix u_plus = rng.unitary(p.module.rank_plus);
  const Matrix u_minus = rng.unitary(p.module.rank_minus);
  Matrix u = Matrix::Zero(p.module.rank(), p.module.rank());
  u.block(0, 0, p.module.rank_plus, p.module.rank_plus) = u_plus;
  u.block(p.module.rank_plus, p.module.rank_plus, p.module.rank_minus,
          p.module.rank_minus) = u_minus;
  for (Matrix& c : p.module.action) c = u * c * u.adjoint();
  for (Matrix& z : p.zs) z = u * z * u.adjoint();
  return p;
}

}  // namespace diraclab::testing
