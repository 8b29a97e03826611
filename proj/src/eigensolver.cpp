#include "diraclab/eigensolver.hpp"

#include <algorithm>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

namespace diraclab {

std::vector<double> dense_eigenvalues(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  std::vector<double> vals(es.eigenvalues().data(),
                           es.eigenvalues().data() + es.eigenvalues().size());
  return vals;
}

std::vector<double> lowest_eigenvalues(const SparseMatrix& h, int k,
                                       const EigensolveOptions& opts) {
  const int dim = static_cast<int>(h.rows());
  k = std::min(k, dim);
  if (k <= 0) return {};

  if (dim <= opts.dense_cutoff) {
    std::vector<double> vals = dense_eigenvalues(Matrix(h));
    vals.resize(k);
    return vals;
  }

  // shift-invert subspace iteration with Rayleigh-Ritz extraction
  const int block = std::min(dim, std::max(2 * k, k + 12));
  SparseMatrix shifted = h;
  SparseMatrix id(dim, dim);
  id.setIdentity();
  shifted -= opts.shift * id;
  Eigen::SparseLU<SparseMatrix> lu;
  lu.compute(shifted);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("lowest_eigenvalues: sparse factorization failed");

  Rng rng(opts.seed);
  Matrix v(dim, block);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < block; ++j)
      v(i, j) = Complex(rng.gaussian(), rng.gaussian());

  auto orthonormalize = [&](Matrix& m) {
    Eigen::HouseholderQR<Matrix> qr(m);
    m = qr.householderQ() * Matrix::Identity(dim, block);
  };
  orthonormalize(v);

  std::vector<double> ritz(k, 0.0);
  for (int round = 0; round < opts.max_rounds; ++round) {
    Matrix w(dim, block);
    for (int j = 0; j < block; ++j) w.col(j) = lu.solve(v.col(j));
    orthonormalize(w);
    v = w;

    const Matrix hv = h * v;
    Matrix small = v.adjoint() * hv;
    small = 0.5 * (small + small.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(small);

    const Matrix y = es.eigenvectors().leftCols(k);
    const Matrix rv = v * y;
    const Matrix hrv = hv * y;
    double worst = 0.0;
    for (int j = 0; j < k; ++j) {
      ritz[j] = es.eigenvalues()(j);
      const double res = (hrv.col(j) - ritz[j] * rv.col(j)).norm();
      worst = std::max(worst, res / std::max(1.0, std::abs(ritz[j])));
    }
    if (worst < opts.tol) return ritz;
  }
  throw std::runtime_error("lowest_eigenvalues: subspace iteration did not converge");
}

}  // namespace diraclab
