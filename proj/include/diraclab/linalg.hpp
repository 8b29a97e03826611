#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace diraclab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Raised when an operation's stated precondition fails (CLI exit code 3).
class precondition_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a discretized spectrum has no usable gap (CLI exit code 4).
class inconclusive_gap_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double max_abs(const Matrix& a) { return a.cwiseAbs().maxCoeff(); }

inline double hermiticity_residual(const Matrix& a) {
  return max_abs(a - a.adjoint());
}

inline double skewness_residual(const Matrix& a) {
  return max_abs(a + a.adjoint());
}

// max |AB + BA|
inline double anticommutator_residual(const Matrix& a, const Matrix& b) {
  return max_abs(a * b + b * a);
}

// max |AB - BA|
inline double commutator_residual(const Matrix& a, const Matrix& b) {
  return max_abs(a * b - b * a);
}

Matrix kron(const Matrix& a, const Matrix& b);

double smallest_singular_value(const Matrix& a);

// Dimension of the numerical kernel of `a` (singular values below tol).
int nullity(const Matrix& a, double tol);

// Deterministic random source. Box-Muller over the raw mt19937_64 stream,
// so values do not depend on the standard library's distribution code.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform();     // [0, 1)
  double gaussian();    // standard normal
  int uniform_int(int lo, int hi);  // inclusive bounds

  Matrix hermitian(int n);
  Matrix unitary(int n);
  RealMatrix orthogonal(int n);
  RealMatrix real_matrix(int rows, int cols);

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// `count` deterministic points on the unit sphere in R^dim.
std::vector<RealVector> sphere_points(int dim, int count, std::uint64_t seed);

inline constexpr std::uint64_t kDefaultSeed = 20040719;  // fixed project seed

}  // namespace diraclab
