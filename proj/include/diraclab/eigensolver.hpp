#pragma once

#include <vector>

#include <Eigen/Sparse>

#include "diraclab/linalg.hpp"

namespace diraclab {

using SparseMatrix = Eigen::SparseMatrix<Complex>;

struct EigensolveOptions {
  int dense_cutoff = 5000;   // dense Hermitian solve up to this many rows
  double shift = -1.0;       // shift-invert target, below the spectrum
  double tol = 1e-9;         // relative Ritz residual
  int max_rounds = 200;
  std::uint64_t seed = kDefaultSeed;
};

// k smallest eigenvalues of a Hermitian matrix, ascending. Dense solve for
// small problems, shift-invert subspace iteration with a sparse LU for the
// rest. Subspace iteration (rather than a single Lanczos vector) so that
// multiplicities are resolved reliably.
std::vector<double> lowest_eigenvalues(const SparseMatrix& h, int k,
                                       const EigensolveOptions& opts = {});

std::vector<double> dense_eigenvalues(const Matrix& h);

}  // namespace diraclab
