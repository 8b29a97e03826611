#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "diraclab/clifford.hpp"
#include "diraclab/linalg.hpp"

using namespace diraclab;

TEST_CASE("irreducible representations satisfy the defining relations") {
  for (int n = 1; n <= 8; ++n) {
    CAPTURE(n);
    const CliffordRep rep = build_irreducible_rep(n);
    CHECK(rep.dim == 1 << (n / 2));
    CHECK(check_rep_invariants(rep).max() <= 1e-12);
  }
}

TEST_CASE("n=1 generator squares to minus one") {
  const CliffordRep rep = build_irreducible_rep(1);
  REQUIRE(rep.dim == 1);
  const Complex g = rep.generators[0](0, 0);
  CHECK(std::abs(g * g + 1.0) < 1e-15);  // g = i or -i
}

TEST_CASE("n=2 anticommutation and chirality square") {
  const CliffordRep rep = build_irreducible_rep(2);
  CHECK(anticommutator_residual(rep.generators[0], rep.generators[1]) < 1e-14);
  CHECK(max_abs(rep.chirality * rep.chirality - Matrix::Identity(2, 2)) <
        1e-14);
}

TEST_CASE("n=4 all six anticommutator relations vanish") {
  const CliffordRep rep = build_irreducible_rep(4);
  REQUIRE(rep.dim == 4);
  for (int j = 0; j < 4; ++j)
    for (int k = j + 1; k < 4; ++k)
      CHECK(anticommutator_residual(rep.generators[j], rep.generators[k]) <
            1e-14);
}

TEST_CASE("even chirality is the sorted grading") {
  for (int n : {2, 4, 6}) {
    const CliffordRep rep = build_irreducible_rep(n);
    Matrix expected = Matrix::Zero(rep.dim, rep.dim);
    for (int i = 0; i < rep.dim / 2; ++i) expected(i, i) = 1.0;
    for (int i = rep.dim / 2; i < rep.dim; ++i) expected(i, i) = -1.0;
    CHECK(max_abs(rep.chirality - expected) < 1e-14);
  }
}

TEST_CASE("construction is reproducible") {
  const CliffordRep a = build_irreducible_rep(5);
  const CliffordRep b = build_irreducible_rep(5);
  for (int j = 0; j < 5; ++j)
    CHECK(max_abs(a.generators[j] - b.generators[j]) == 0.0);
}

TEST_CASE("graded module with trivial odd twist recovers the natural grading") {
  const CliffordRep rep = build_irreducible_rep(2);
  const GradedModule mod = build_graded_module(rep, TwistSpec::even(1, 0));
  CHECK(mod.rank() == 2);
  CHECK(mod.rank_plus == 1);
  CHECK(module_invariant_residual(mod) < 1e-14);
  // W^- = 0: the action is the representation itself
  for (int j = 0; j < 2; ++j)
    CHECK(max_abs(mod.action[j] - rep.generators[j]) < 1e-14);
}

TEST_CASE("graded module with W+ = W- = C") {
  const CliffordRep rep = build_irreducible_rep(2);
  const GradedModule mod = build_graded_module(rep, TwistSpec::even(1, 1));
  CHECK(mod.rank_plus == 2);
  CHECK(mod.rank_minus == 2);
  CHECK(module_invariant_residual(mod) < 1e-14);
}

TEST_CASE("odd graded module matches c+ tensor diag(1,-1) up to the basis change") {
  const CliffordRep rep = build_irreducible_rep(3);
  const GradedModule mod = build_graded_module(rep, TwistSpec::odd(1));
  REQUIRE(mod.rank() == 4);
  CHECK(module_invariant_residual(mod) < 1e-13);

  // unitary sending the graded basis (w, w)/sqrt2, (w, -w)/sqrt2 to the
  // product basis of S (x) (W' + W')
  const int s_dim = rep.dim;
  Matrix u = Matrix::Zero(2 * s_dim, 2 * s_dim);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int a = 0; a < s_dim; ++a) {
    // product index (a, component): a * 2 + comp
    u(a * 2 + 0, a) = inv_sqrt2;
    u(a * 2 + 1, a) = inv_sqrt2;
    u(a * 2 + 0, s_dim + a) = inv_sqrt2;
    u(a * 2 + 1, s_dim + a) = -inv_sqrt2;
  }
  const Matrix d = (Matrix(2, 2) << 1, 0, 0, -1).finished();
  for (int j = 0; j < 3; ++j) {
    const Matrix product_form = kron(rep.generators[j], d);
    CHECK(max_abs(u.adjoint() * product_form * u - mod.action[j]) < 1e-13);
  }
}

TEST_CASE("admissible ranks") {
  CHECK(admissible_rank(3, 2));
  CHECK_FALSE(admissible_rank(4, 3));
  CHECK(admissible_rank(1, 1));
  CHECK_THROWS_AS(admissible_rank(0, 1), precondition_error);
}

TEST_CASE("invertible pencils stay away from the singular locus") {
  for (int k = 1; k <= 6; ++k) {
    for (int m = 1; m <= 2; ++m) {
      CAPTURE(k);
      CAPTURE(m);
      const auto pencil = build_invertible_pencil(k, m);
      REQUIRE(static_cast<int>(pencil.size()) == k);
      const int size = static_cast<int>(pencil[0].rows());
      CHECK(size == m * (1 << ((k - 1) / 2)));
      CHECK(admissible_rank(k, size));

      double lo = std::numeric_limits<double>::infinity();
      for (const RealVector& sigma : sphere_points(k, 1000, kDefaultSeed)) {
        Matrix l = Matrix::Zero(size, size);
        for (int j = 0; j < k; ++j) l += sigma(j) * pencil[j];
        lo = std::min(lo, smallest_singular_value(l));
      }
      CHECK(lo >= 1e-8);
    }
  }
}

TEST_CASE("k=1 pencil is the identity") {
  const auto pencil = build_invertible_pencil(1, 1);
  REQUIRE(pencil.size() == 1);
  CHECK(max_abs(pencil[0] - Matrix::Identity(1, 1)) == 0.0);
}

TEST_CASE("k=3 pencil determinant is the quadric") {
  const auto pencil = build_invertible_pencil(3, 1);
  Rng rng(kDefaultSeed);
  for (int trial = 0; trial < 20; ++trial) {
    RealVector x(3);
    for (int j = 0; j < 3; ++j) x(j) = rng.gaussian();
    Matrix l = Matrix::Zero(2, 2);
    for (int j = 0; j < 3; ++j) l += x(j) * pencil[j];
    CHECK(std::abs(std::abs(l.determinant()) - x.squaredNorm()) <
          1e-12 * std::max(1.0, x.squaredNorm()));
  }
}

TEST_CASE("no graded anticommuting endomorphism exists on spinors") {
  for (int n : {2, 4, 6}) {
    CAPTURE(n);
    const NoPerturbationReport report =
        no_perturbation_witness(build_irreducible_rep(n));
    CHECK(report.nullity_graded == 0);
    CHECK(report.nullity_ungraded == 1);
    CHECK(report.chirality_alignment > 1.0 - 1e-9);  // spanned by gamma
  }
}

TEST_CASE("twisted variant has the gamma (x) End(W) solution space") {
  const CliffordRep rep = build_irreducible_rep(2);
  const NoPerturbationReport report = no_perturbation_witness_twisted(rep, 2);
  CHECK(report.nullity_graded == 0);
  CHECK(report.nullity_ungraded == 4);  // gamma (x) phi, phi in End(C^2)
}

TEST_CASE("witness requires even dimension") {
  CHECK_THROWS_AS(no_perturbation_witness(build_irreducible_rep(3)),
                  precondition_error);
}
