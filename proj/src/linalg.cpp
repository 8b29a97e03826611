#include "diraclab/linalg.hpp"

#include <cmath>

#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

namespace diraclab {

Matrix kron(const Matrix& a, const Matrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

double smallest_singular_value(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues().size() > 0 ? svd.singularValues().minCoeff()
                                         : 0.0;
}

int nullity(const Matrix& a, double tol) {
  Eigen::JacobiSVD<Matrix> svd(a);
  int count = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) < tol) ++count;
  }
  count += static_cast<int>(a.cols() - svd.singularValues().size());
  return count;
}

double Rng::uniform() {
  // 53 random bits -> [0,1)
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

int Rng::uniform_int(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(gen_() % span);
}

Matrix Rng::hermitian(int n) {
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(gaussian(), gaussian());
  return 0.5 * (a + a.adjoint());
}

Matrix Rng::unitary(int n) {
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(gaussian(), gaussian());
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  // fix phases so the factorization is unique
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    const Complex d = r(i, i);
    if (std::abs(d) > 0) q.col(i) *= d / std::abs(d);
  }
  return q;
}

RealMatrix Rng::orthogonal(int n) {
  RealMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = gaussian();
  Eigen::HouseholderQR<RealMatrix> qr(a);
  RealMatrix q = qr.householderQ();
  RealMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    if (r(i, i) < 0) q.col(i) *= -1.0;
  }
  return q;
}

RealMatrix Rng::real_matrix(int rows, int cols) {
  RealMatrix a(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) a(i, j) = gaussian();
  return a;
}

std::vector<RealVector> sphere_points(int dim, int count, std::uint64_t seed) {
  if (dim < 1) throw precondition_error("sphere_points: dim must be >= 1");
  std::vector<RealVector> pts;
  pts.reserve(count);
  if (dim == 1) {
    // S^0 = {+1, -1}; alternate deterministically
    for (int i = 0; i < count; ++i) {
      RealVector v(1);
      v(0) = (i % 2 == 0) ? 1.0 : -1.0;
      pts.push_back(v);
    }
    return pts;
  }
  Rng rng(seed);
  while (static_cast<int>(pts.size()) < count) {
    RealVector v(dim);
    for (int j = 0; j < dim; ++j) v(j) = rng.gaussian();
    const double norm = v.norm();
    if (norm < 1e-12) continue;
    pts.push_back(v / norm);
  }
  return pts;
}

}  // namespace diraclab
