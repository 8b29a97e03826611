#include "diraclab/clifford.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/SVD>

namespace diraclab {

namespace {

Matrix pauli(int which) {
  Matrix s(2, 2);
  switch (which) {
    case 1:
      s << 0, 1, 1, 0;
      break;
    case 2:
      s << 0, Complex(0, -1), Complex(0, 1), 0;
      break;
    default:
      s << 1, 0, 0, -1;
      break;
  }
  return s;
}

// sigma3^(x)(k-1) (x) factor (x) I^(x)(m-k) on (C^2)^(x)m
Matrix chain(int m, int slot, const Matrix& factor) {
  Matrix out = Matrix::Identity(1, 1);
  for (int pos = 1; pos <= m; ++pos) {
    if (pos < slot)
      out = kron(out, pauli(3));
    else if (pos == slot)
      out = kron(out, factor);
    else
      out = kron(out, Matrix::Identity(2, 2));
  }
  return out;
}

// Hermitian anticommuting family h_1..h_n with h_j^2 = 1.
std::vector<Matrix> hermitian_family(int n) {
  const int m = n / 2;
  std::vector<Matrix> hs;
  hs.reserve(n);
  for (int k = 1; k <= m; ++k) {
    hs.push_back(chain(m, k, pauli(1)));
    hs.push_back(chain(m, k, pauli(2)));
  }
  if (n % 2 == 1) {
    // minus sign fixes the chirality element of the odd representation at +1
    Matrix top = Matrix::Identity(1, 1);
    for (int k = 0; k < m; ++k) top = kron(top, pauli(3));
    hs.push_back(-top);
  }
  return hs;
}

Matrix chirality_of(const std::vector<Matrix>& gens, int n) {
  const int k = (n % 2 == 0) ? n / 2 : (n + 1) / 2;
  Matrix gamma = Matrix::Identity(gens[0].rows(), gens[0].cols());
  for (const Matrix& g : gens) gamma = gamma * g;
  return std::pow(Complex(0, 1), k) * gamma;
}

}  // namespace

Matrix permute_basis(const Matrix& a, const std::vector<int>& perm) {
  Matrix b(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) b(perm[i], perm[j]) = a(i, j);
  return b;
}

double RepInvariantReport::max() const {
  return std::max({clifford, skew_adjoint, chirality_def, chirality_square,
                   chirality_parity});
}

CliffordRep build_irreducible_rep(int n) {
  if (n < 1) throw precondition_error("build_irreducible_rep: n must be >= 1");
  CliffordRep rep;
  rep.n = n;
  rep.dim = 1 << (n / 2);
  const Complex i(0, 1);
  for (const Matrix& h : hermitian_family(n)) rep.generators.push_back(i * h);
  rep.chirality = chirality_of(rep.generators, n);

  if (n % 2 == 0) {
    // sort the basis so that gamma = diag(I, -I)
    std::vector<int> order(rep.dim);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return rep.chirality(a, a).real() > rep.chirality(b, b).real();
    });
    std::vector<int> perm(rep.dim);
    for (int pos = 0; pos < rep.dim; ++pos) perm[order[pos]] = pos;
    for (Matrix& g : rep.generators) g = permute_basis(g, perm);
    rep.chirality = permute_basis(rep.chirality, perm);
  }
  return rep;
}

RepInvariantReport check_rep_invariants(const CliffordRep& rep) {
  RepInvariantReport r;
  const int n = rep.n;
  const Matrix id = Matrix::Identity(rep.dim, rep.dim);
  for (int j = 0; j < n; ++j) {
    const Matrix& gj = rep.generators[j];
    r.skew_adjoint = std::max(r.skew_adjoint, skewness_residual(-gj));
    for (int k = 0; k < n; ++k) {
      const Matrix& gk = rep.generators[k];
      const Matrix rel =
          gj * gk + gk * gj + (j == k ? 2.0 : 0.0) * id;
      r.clifford = std::max(r.clifford, max_abs(rel));
    }
    const Matrix parity = rep.chirality * gj +
                          (n % 2 == 0 ? 1.0 : -1.0) * gj * rep.chirality;
    r.chirality_parity = std::max(r.chirality_parity, max_abs(parity));
  }
  r.chirality_def = max_abs(rep.chirality - chirality_of(rep.generators, n));
  r.chirality_square = max_abs(rep.chirality * rep.chirality - id);
  return r;
}

TwistSpec TwistSpec::even(int w_plus, int w_minus) {
  if (w_plus < 0 || w_minus < 0 || w_plus + w_minus == 0)
    throw precondition_error("TwistSpec::even: W dimensions must be >= 0 and not both zero");
  TwistSpec t;
  t.parity = Parity::kEven;
  t.dim_w_plus = w_plus;
  t.dim_w_minus = w_minus;
  return t;
}

TwistSpec TwistSpec::odd(int w_prime) {
  if (w_prime < 1)
    throw precondition_error("TwistSpec::odd: W' dimension must be >= 1");
  TwistSpec t;
  t.parity = Parity::kOdd;
  t.dim_w_prime = w_prime;
  return t;
}

int TwistSpec::total_rank(int n) const {
  if (parity == Parity::kEven)
    return (1 << (n / 2)) * (dim_w_plus + dim_w_minus);
  return (1 << ((n + 1) / 2)) * dim_w_prime;
}

Matrix GradedModule::grading() const {
  Matrix eps = Matrix::Zero(rank(), rank());
  for (int i = 0; i < rank_plus; ++i) eps(i, i) = 1.0;
  for (int i = rank_plus; i < rank(); ++i) eps(i, i) = -1.0;
  return eps;
}

Matrix GradedModule::block_minus_plus(const Matrix& x) const {
  return x.block(rank_plus, 0, rank_minus, rank_plus);
}
Matrix GradedModule::block_plus_minus(const Matrix& x) const {
  return x.block(0, rank_plus, rank_plus, rank_minus);
}
Matrix GradedModule::block_plus_plus(const Matrix& x) const {
  return x.block(0, 0, rank_plus, rank_plus);
}
Matrix GradedModule::block_minus_minus(const Matrix& x) const {
  return x.block(rank_plus, rank_plus, rank_minus, rank_minus);
}

double module_invariant_residual(const GradedModule& m) {
  double res = 0.0;
  const Matrix eps = m.grading();
  const Matrix id = Matrix::Identity(m.rank(), m.rank());
  for (size_t j = 0; j < m.action.size(); ++j) {
    res = std::max(res, skewness_residual(-m.action[j]));
    res = std::max(res, anticommutator_residual(eps, m.action[j]));
    for (size_t k = 0; k < m.action.size(); ++k) {
      const Matrix rel = m.action[j] * m.action[k] + m.action[k] * m.action[j] +
                         (j == k ? 2.0 : 0.0) * id;
      res = std::max(res, max_abs(rel));
    }
  }
  return res;
}

GradedModule build_graded_module(const CliffordRep& rep,
                                 const TwistSpec& twist) {
  const bool rep_even = rep.n % 2 == 0;
  if (rep_even != (twist.parity == Parity::kEven))
    throw precondition_error("build_graded_module: parity mismatch between representation and twist");

  GradedModule mod;
  mod.n = rep.n;

  if (rep_even) {
    const int w = twist.dim_w_plus + twist.dim_w_minus;
    const int half = rep.dim / 2;
    mod.rank_plus = half * w;
    mod.rank_minus = half * w;
    const std::vector<int> perm = product_to_graded_permutation(rep, twist);
    const Matrix iw = Matrix::Identity(w, w);
    for (const Matrix& g : rep.generators)
      mod.action.push_back(permute_basis(kron(g, iw), perm));
  } else {
    const int d = twist.dim_w_prime;
    const int half = rep.dim * d;
    mod.rank_plus = half;
    mod.rank_minus = half;
    const Matrix id = Matrix::Identity(d, d);
    for (const Matrix& g : rep.generators) {
      Matrix c = Matrix::Zero(2 * half, 2 * half);
      c.block(0, half, half, half) = kron(g, id);
      c.block(half, 0, half, half) = kron(g, id);
      mod.action.push_back(c);
    }
  }
  return mod;
}

std::vector<int> product_to_graded_permutation(const CliffordRep& rep,
                                               const TwistSpec& twist) {
  // product basis of S (x) W, graded by gamma (x) diag(I_{w+}, -I_{w-});
  // stable sort keeps the construction reproducible
  const int w = twist.dim_w_plus + twist.dim_w_minus;
  const int total = rep.dim * w;
  std::vector<int> sign(total);
  for (int a = 0; a < rep.dim; ++a) {
    const int gs = rep.chirality(a, a).real() > 0 ? 1 : -1;
    for (int i = 0; i < w; ++i) {
      const int ws = i < twist.dim_w_plus ? 1 : -1;
      sign[a * w + i] = gs * ws;
    }
  }
  std::vector<int> order(total);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return sign[a] > sign[b]; });
  std::vector<int> perm(total);
  for (int pos = 0; pos < total; ++pos) perm[order[pos]] = pos;
  return perm;
}

bool admissible_rank(int k, int r) {
  if (k < 1 || r < 1)
    throw precondition_error("admissible_rank: arguments must be positive");
  const int unit = 1 << ((k - 1) / 2);
  return r % unit == 0;
}

std::vector<Matrix> build_invertible_pencil(int k, int m) {
  if (k < 1 || m < 1)
    throw precondition_error("build_invertible_pencil: arguments must be positive");
  std::vector<Matrix> pencil;
  if (k == 1) {
    pencil.push_back(Matrix::Identity(m, m));
    return pencil;
  }
  const CliffordRep rep = build_irreducible_rep(k);
  const Matrix im = Matrix::Identity(m, m);
  if (k % 2 == 1) {
    for (const Matrix& g : rep.generators) pencil.push_back(kron(g, im));
  } else {
    // restriction of Clifford multiplication to S^+ (x) C^m
    const int half = rep.dim / 2;
    for (const Matrix& g : rep.generators)
      pencil.push_back(kron(g.block(half, 0, half, half), im));
  }
  return pencil;
}

int solve_anticommutant_nullity(const std::vector<Matrix>& generators,
                                const Matrix* grading, double tol,
                                Matrix* sample_solution) {
  const int d = static_cast<int>(generators[0].rows());
  const int d2 = d * d;
  const int blocks =
      static_cast<int>(generators.size()) + (grading != nullptr ? 1 : 0);
  Matrix system = Matrix::Zero(blocks * d2, d2);
  const Matrix id = Matrix::Identity(d, d);
  int row = 0;
  auto add_anticommutator = [&](const Matrix& g) {
    // vec(ZG + GZ) = (G^T (x) I + I (x) G) vec(Z), column-major vec
    system.block(row * d2, 0, d2, d2) =
        kron(g.transpose(), id) + kron(id, g);
    ++row;
  };
  for (const Matrix& g : generators) add_anticommutator(g);
  if (grading != nullptr) add_anticommutator(*grading);

  Eigen::JacobiSVD<Matrix> svd(system, Eigen::ComputeThinV);
  const double scale = svd.singularValues()(0);
  int count = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) < tol * std::max(1.0, scale)) ++count;
  if (sample_solution != nullptr && count > 0) {
    const Vector v = svd.matrixV().col(d2 - 1);
    *sample_solution = Eigen::Map<const Matrix>(v.data(), d, d);
  }
  return count;
}

NoPerturbationReport no_perturbation_witness(const CliffordRep& rep) {
  if (rep.n % 2 != 0)
    throw precondition_error("no_perturbation_witness: n must be even");
  NoPerturbationReport report;
  report.n = rep.n;
  const double tol = 1e-10;
  const Matrix gamma = rep.chirality;
  report.nullity_graded =
      solve_anticommutant_nullity(rep.generators, &gamma, tol);
  Matrix sol;
  report.nullity_ungraded =
      solve_anticommutant_nullity(rep.generators, nullptr, tol, &sol);
  if (report.nullity_ungraded > 0) {
    const Complex overlap = (gamma.adjoint() * sol).trace();
    report.chirality_alignment =
        std::abs(overlap) / (gamma.norm() * sol.norm());
  }
  return report;
}

NoPerturbationReport no_perturbation_witness_twisted(const CliffordRep& rep,
                                                     int w_dim) {
  if (rep.n % 2 != 0)
    throw precondition_error("no_perturbation_witness_twisted: n must be even");
  NoPerturbationReport report;
  report.n = rep.n;
  const double tol = 1e-10;
  const Matrix iw = Matrix::Identity(w_dim, w_dim);
  std::vector<Matrix> gens;
  for (const Matrix& g : rep.generators) gens.push_back(kron(g, iw));
  const Matrix grading = kron(rep.chirality, iw);
  report.nullity_graded = solve_anticommutant_nullity(gens, &grading, tol);
  Matrix sol;
  report.nullity_ungraded =
      solve_anticommutant_nullity(gens, nullptr, tol, &sol);
  if (report.nullity_ungraded > 0) {
    const Complex overlap = (grading.adjoint() * sol).trace();
    report.chirality_alignment =
        std::abs(overlap) / (grading.norm() * sol.norm());
  }
  return report;
}

}  // namespace diraclab
