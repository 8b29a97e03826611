#include "diraclab/perturbation.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace diraclab {

bool check_anticommutation(const GradedModule& module, const Matrix& z,
                           double tol) {
  if (z.rows() != module.rank() || z.cols() != module.rank())
    throw precondition_error("check_anticommutation: size mismatch");
  for (const Matrix& c : module.action) {
    if (anticommutator_residual(z, c) > tol) return false;
  }
  return true;
}

std::optional<RealMatrix> scalar_square_form(const std::vector<Matrix>& zs,
                                             double tol) {
  const int n = static_cast<int>(zs.size());
  const int d = static_cast<int>(zs[0].rows());
  const Matrix id = Matrix::Identity(d, d);
  RealMatrix q(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const Matrix sym = 0.5 * (zs[j] * zs[k] + zs[k] * zs[j]);
      const Complex mean = sym.trace() / static_cast<double>(d);
      if (std::abs(mean.imag()) > tol) return std::nullopt;
      if (max_abs(sym - mean * id) > tol * std::max(1.0, std::abs(mean)))
        return std::nullopt;
      q(j, k) = mean.real();
    }
  }
  return q;
}

ProperReport check_proper(const LinearPerturbation& p, int samples,
                          std::uint64_t seed) {
  if (samples < 1) throw precondition_error("check_proper: samples must be >= 1");
  ProperReport report;

  report.anticommutes = true;
  for (const Matrix& z : p.zs) {
    if (hermiticity_residual(z) > kHermitianTol ||
        !check_anticommutation(p.module, z)) {
      report.anticommutes = false;
      break;
    }
  }

  const auto q = scalar_square_form(p.zs);
  report.scalar_square = q.has_value();
  if (q) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(*q);
    const double lam = es.eigenvalues().minCoeff();
    report.c_lower = lam > 0 ? std::sqrt(lam) : 0.0;
  } else {
    double lo = std::numeric_limits<double>::infinity();
    for (const RealVector& sigma : sphere_points(p.n, samples, seed)) {
      Matrix z = Matrix::Zero(p.module.rank(), p.module.rank());
      for (int j = 0; j < p.n; ++j) z += sigma(j) * p.zs[j];
      lo = std::min(lo, smallest_singular_value(z));
    }
    report.c_lower = lo;
  }

  report.rank_ok = check_rank_constraints(p, /*has_singular_points=*/true);
  report.is_proper =
      report.c_lower > kProperTol && report.anticommutes && report.rank_ok;
  return report;
}

LinearPerturbation build_even(const CliffordRep& rep, const TwistSpec& twist,
                              const std::vector<Matrix>& phis) {
  if (rep.n % 2 != 0) throw precondition_error("build_even: n must be even");
  if (twist.parity != Parity::kEven)
    throw precondition_error("build_even: twist parity mismatch");
  if (twist.dim_w_plus != twist.dim_w_minus)
    throw precondition_error("build_even: W^+ and W^- must have the same dimension");
  if (static_cast<int>(phis.size()) != rep.n)
    throw precondition_error("build_even: need one phi_j per coordinate");

  const int wp = twist.dim_w_plus;
  LinearPerturbation p;
  p.n = rep.n;
  p.module = build_graded_module(rep, twist);
  p.basepoint = RealVector::Zero(rep.n);

  const std::vector<int> perm = product_to_graded_permutation(rep, twist);
  for (const Matrix& phi_plus : phis) {
    if (phi_plus.rows() != wp || phi_plus.cols() != wp)
      throw precondition_error("build_even: phi block size mismatch");
    Matrix phi = Matrix::Zero(2 * wp, 2 * wp);
    phi.block(0, wp, wp, wp) = phi_plus.adjoint();
    phi.block(wp, 0, wp, wp) = phi_plus;
    p.zs.push_back(permute_basis(kron(rep.chirality, phi), perm));
  }
  return p;
}

LinearPerturbation build_odd(const CliffordRep& rep, int dim_w_prime,
                             const std::vector<Matrix>& phis) {
  if (rep.n % 2 != 1) throw precondition_error("build_odd: n must be odd");
  if (static_cast<int>(phis.size()) != rep.n)
    throw precondition_error("build_odd: need one phi_j per coordinate");

  LinearPerturbation p;
  p.n = rep.n;
  p.module = build_graded_module(rep, TwistSpec::odd(dim_w_prime));
  p.basepoint = RealVector::Zero(rep.n);

  const int half = p.module.rank_plus;
  const Matrix is = Matrix::Identity(rep.dim, rep.dim);
  for (const Matrix& phi : phis) {
    if (phi.rows() != dim_w_prime || phi.cols() != dim_w_prime)
      throw precondition_error("build_odd: phi size mismatch");
    if (max_abs(phi + phi.adjoint()) > kHermitianTol)
      throw precondition_error("build_odd: phi must be skew-adjoint");
    // 1 (x) [[0, phi],[-phi, 0]] expressed in the graded basis of E
    Matrix z = Matrix::Zero(2 * half, 2 * half);
    z.block(0, half, half, half) = -kron(is, phi);
    z.block(half, 0, half, half) = kron(is, phi);
    p.zs.push_back(z);
  }
  return p;
}

CoordinateNormalization normalize(const LinearPerturbation& p) {
  const auto q = scalar_square_form(p.zs);
  if (!q)
    throw precondition_error(
        "normalize: Z(x)^2 is not a scalar quadratic form; use the "
        "discretization oracle instead");
  CoordinateNormalization norm;
  norm.q = *q;
  RealMatrix off = *q;
  off.diagonal().setZero();
  if (off.cwiseAbs().maxCoeff() < 1e-12) {
    // already diagonal: keep the coordinates, rescale only
    norm.u = RealMatrix::Identity(p.n, p.n);
    norm.d = q->diagonal();
  } else {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(*q);
    norm.u = es.eigenvectors().transpose();  // u q u^T = diag(d)
    norm.d = es.eigenvalues();
  }
  if (norm.d.minCoeff() <= 0)
    throw precondition_error("normalize: quadratic form is not positive definite");

  // Zt_j = sum_k (sqrt(D)^{-1} U)_{jk} Z_k
  for (int j = 0; j < p.n; ++j) {
    Matrix zt = Matrix::Zero(p.module.rank(), p.module.rank());
    for (int k = 0; k < p.n; ++k)
      zt += (norm.u(j, k) / std::sqrt(norm.d(j))) * p.zs[k];
    norm.zt.push_back(zt);
  }
  return norm;
}

bool check_rank_constraints(const LinearPerturbation& p,
                            bool has_singular_points) {
  const int rank = p.module.rank();
  const int base = (p.n % 2 == 0) ? (1 << (p.n / 2 + 1)) : (1 << ((p.n + 1) / 2));
  if (rank % base != 0) return false;
  if (has_singular_points) {
    const long full = 1L << p.n;
    if (rank % full != 0) return false;
  }
  return true;
}

}  // namespace diraclab
