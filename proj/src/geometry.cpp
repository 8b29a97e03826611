#include "diraclab/geometry.hpp"

#include <cmath>

namespace diraclab {

VectorFieldSpec VectorFieldSpec::sphere_preset() {
  VectorFieldSpec spec;
  spec.n = 2;
  spec.zeros.push_back({"north", RealMatrix::Identity(2, 2)});
  spec.zeros.push_back({"south", RealMatrix::Identity(2, 2)});
  return spec;
}

VectorFieldSpec VectorFieldSpec::torus_preset() {
  VectorFieldSpec spec;
  spec.n = 2;
  const double signs[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  const char* labels[4] = {"(0,0)", "(0,pi)", "(pi,0)", "(pi,pi)"};
  for (int i = 0; i < 4; ++i) {
    RealMatrix v = RealMatrix::Zero(2, 2);
    v(0, 0) = signs[i][0];
    v(1, 1) = signs[i][1];
    spec.zeros.push_back({labels[i], v});
  }
  return spec;
}

PoincareHopfResult poincare_hopf(const VectorFieldSpec& spec) {
  if (spec.n % 2 != 0)
    throw precondition_error("poincare_hopf: dimension must be even");
  const GradedModule forms = de_rham_module(spec.n);
  PoincareHopfResult result;
  for (const VectorFieldZero& zero : spec.zeros) {
    const double det = zero.linearization.determinant();
    if (std::abs(det) < 1e-12)
      throw precondition_error("poincare_hopf: degenerate linearization at " +
                               zero.label);
    const int combinatorial = det > 0 ? 1 : -1;
    const LocalIndexResult oracle =
        fredholm_index_oracle(forms, de_rham_perturbation(zero.linearization));
    if (oracle.index != combinatorial)
      throw std::runtime_error(
          "poincare_hopf: oracle index disagrees with sign det at " +
          zero.label);
    result.per_zero.push_back(combinatorial);
    result.chi += combinatorial;
  }
  return result;
}

RealVector reflect_along(const RealVector& b1, const RealVector& b2) {
  const RealVector unit = b2 / b2.norm();
  return 2.0 * unit.dot(b1) * unit - b1;  // parallel part minus normal part
}

namespace {

Matrix clifford_vector(const CliffordRep& rep, const RealVector& v) {
  Matrix c = Matrix::Zero(rep.dim, rep.dim);
  for (int j = 0; j < rep.n; ++j) c += v(j) * rep.generators[j];
  return c;
}

}  // namespace

bool commuting_lemma_check(const RealVector& b1, const RealVector& b2,
                           const CliffordRep& rep, double tol) {
  if (b2.norm() == 0.0)
    throw precondition_error("commuting_lemma_check: B2 must be nonzero");
  const RealVector reflected = reflect_along(b1, b2);
  const Matrix lhs = clifford_vector(rep, b2) * clifford_vector(rep, b1);
  const Matrix rhs = clifford_vector(rep, reflected) * clifford_vector(rep, b2);
  if (max_abs(lhs - rhs) > tol) return false;

  if (rep.n % 2 == 0) {
    // the reflection reverses orientation, so indices flip
    const RealVector unit = b2 / b2.norm();
    const RealMatrix r =
        2.0 * unit * unit.transpose() - RealMatrix::Identity(rep.n, rep.n);
    if (std::abs(r.determinant() + 1.0) > 1e-9) return false;
  }
  return true;
}

namespace {

// moves the linear factor one slot to the left (or right) through a
// constant factor, reflecting its linearization; verified on the Clifford
// matrices of the tangent space
void verified_swap(RealMatrix& w, const RealVector& v, const CliffordRep& rep) {
  const int n = static_cast<int>(w.rows());
  for (int a = 0; a < n; ++a) {
    const RealVector column = w.col(a);
    if (column.norm() < 1e-14) continue;
    if (!commuting_lemma_check(column, v, rep))
      throw std::runtime_error("pin move: commuting lemma identity failed");
  }
  const RealVector unit = v / v.norm();
  const RealMatrix r =
      2.0 * unit * unit.transpose() - RealMatrix::Identity(n, n);
  w = r * w;
}

}  // namespace

PinSphereResult pin_sphere_indices(int m) {
  if (m < 1) throw precondition_error("pin_sphere_indices: m must be >= 1");
  const int tangent = 2 * m;
  const CliffordRep rep = build_irreducible_rep(tangent);

  PinSphereResult result;
  for (int axis = 1; axis <= 2 * m + 1; ++axis) {
    for (const int pole : {+1, -1}) {
      // tangent coordinates at the pole: the ambient axes other than `axis`,
      // in ascending order; p(E_axis) linearizes to -pole * identity there
      RealMatrix w = -pole * RealMatrix::Identity(tangent, tangent);
      // factors p(E_1)..p(E_{axis-1}) sit to the left of the vanishing one
      for (int left = axis - 1; left >= 1; --left) {
        RealVector v = RealVector::Zero(tangent);
        v(left - 1) = 1.0;  // axis `left` keeps its slot among the tangent axes
        verified_swap(w, v, rep);
      }
      const double det = w.determinant();
      const int index = det > 0 ? 1 : -1;
      result.per_zero.push_back(index);
      result.total += index;
    }
  }
  return result;
}

namespace {

Matrix factorization_matrix(const CliffordRep& rep, int position,
                            const RealMatrix& w,
                            const std::vector<RealVector>& tail,
                            const RealVector& x) {
  Matrix out = Matrix::Identity(rep.dim, rep.dim);
  int slot = 0;
  for (int i = 0; i <= static_cast<int>(tail.size()); ++i) {
    if (i == position) {
      out = out * clifford_vector(rep, w * x);
    } else {
      out = out * clifford_vector(rep, tail[slot]);
      ++slot;
    }
  }
  return out;
}

}  // namespace

bool pin_index_well_defined_check(const PinZeroSpec& spec, int trials,
                                  std::uint64_t seed) {
  const int n = static_cast<int>(spec.v1_linearization.rows());
  if (std::abs(spec.v1_linearization.determinant()) < 1e-12)
    throw precondition_error("pin_index_well_defined_check: V1 degenerate");
  for (const RealVector& v : spec.tail)
    if (v.norm() < 1e-12)
      throw precondition_error("pin_index_well_defined_check: zero tail factor");

  const CliffordRep rep = build_irreducible_rep(n);
  Rng rng(seed);

  auto extract = [&](const RealMatrix& w_in,
                     const std::vector<RealVector>& tail, int position) {
    RealMatrix w = w_in;
    for (int i = position - 1; i >= 0; --i) verified_swap(w, tail[i], rep);
    return w.determinant() > 0 ? 1 : -1;
  };

  const int reference = extract(spec.v1_linearization, spec.tail, 0);

  std::vector<RealVector> samples;
  for (int i = 0; i < 3; ++i) {
    RealVector x(n);
    for (int j = 0; j < n; ++j) x(j) = rng.gaussian();
    samples.push_back(x);
  }

  for (int trial = 0; trial < trials; ++trial) {
    RealMatrix w = spec.v1_linearization;
    std::vector<RealVector> tail = spec.tail;
    int position = 0;

    // append an invertible even product that multiplies out to one
    RealVector w1(n), w2(n);
    for (int j = 0; j < n; ++j) {
      w1(j) = rng.gaussian();
      w2(j) = rng.gaussian();
    }
    tail.push_back(w1);
    tail.push_back(w2);
    tail.push_back(-w2 / w2.squaredNorm());
    tail.push_back(-w1 / w1.squaredNorm());

    std::vector<Matrix> before;
    for (const RealVector& x : samples)
      before.push_back(factorization_matrix(rep, position, w, tail, x));

    // shuffle the vanishing factor through the word
    const int target = rng.uniform_int(0, static_cast<int>(tail.size()));
    while (position < target) {
      verified_swap(w, tail[position], rep);
      ++position;
    }
    while (position > target) {
      verified_swap(w, tail[position - 1], rep);
      --position;
    }

    for (size_t i = 0; i < samples.size(); ++i) {
      const Matrix after =
          factorization_matrix(rep, position, w, tail, samples[i]);
      if (max_abs(after - before[i]) >
          1e-9 * std::max(1.0, max_abs(before[i])))
        return false;  // the word stopped representing the same section
    }
    if (extract(w, tail, position) != reference) return false;
  }
  return true;
}

SubmanifoldReport submanifold_vanishing(int tangent_dim, int normal_rank,
                                        double omega_scale) {
  if (normal_rank < 1 || normal_rank % 2 == 0)
    throw precondition_error(
        "submanifold_vanishing: the normal bundle must have odd rank");
  if (omega_scale == 0.0)
    throw precondition_error("submanifold_vanishing: omega must be nonzero");

  const int ambient = tangent_dim + normal_rank;
  const CliffordRep rep = build_irreducible_rep(ambient);
  const TwistSpec twist = ambient % 2 == 0 ? TwistSpec::even(1, 0)
                                           : TwistSpec::odd(1);
  const GradedModule module = build_graded_module(rep, twist);

  Matrix z = Matrix::Identity(module.rank(), module.rank());
  for (int j = tangent_dim; j < ambient; ++j) z = z * module.action[j];
  z *= omega_scale * std::pow(Complex(0, 1), (normal_rank + 1) / 2);

  SubmanifoldReport report;
  report.hermitian_residual = hermiticity_residual(z);
  report.min_singular_value = smallest_singular_value(z);
  double anti = 0.0;
  for (int j = 0; j < tangent_dim; ++j)
    anti = std::max(anti, anticommutator_residual(z, module.action[j]));
  report.anticommute_residual = anti;
  report.ok = report.hermitian_residual <= 1e-10 &&
              report.min_singular_value > 1e-8 &&
              report.anticommute_residual <= 1e-10;
  if (!report.ok)
    throw std::runtime_error("submanifold_vanishing: verification failed");
  report.index = global_index({});
  return report;
}

}  // namespace diraclab
