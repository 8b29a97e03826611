#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "diraclab/geometry.hpp"

using namespace diraclab;

TEST_CASE("sphere preset: two sources, chi = 2") {
  const PoincareHopfResult r = poincare_hopf(VectorFieldSpec::sphere_preset());
  REQUIRE(r.per_zero.size() == 2);
  CHECK(r.per_zero[0] == 1);
  CHECK(r.per_zero[1] == 1);
  CHECK(r.chi == 2);
}

TEST_CASE("torus preset: alternating signs, chi = 0") {
  const PoincareHopfResult r = poincare_hopf(VectorFieldSpec::torus_preset());
  REQUIRE(r.per_zero.size() == 4);
  CHECK(r.per_zero[0] + r.per_zero[1] + r.per_zero[2] + r.per_zero[3] == 0);
  CHECK(r.chi == 0);
}

TEST_CASE("single saddle gives chi = -1 as local data") {
  VectorFieldSpec spec;
  spec.n = 2;
  RealMatrix v = RealMatrix::Identity(2, 2);
  v(1, 1) = -1.0;
  spec.zeros.push_back({"saddle", v});
  const PoincareHopfResult r = poincare_hopf(spec);
  CHECK(r.per_zero[0] == -1);
  CHECK(r.chi == -1);
}

TEST_CASE("degenerate linearizations are rejected") {
  VectorFieldSpec spec;
  spec.n = 2;
  RealMatrix v = RealMatrix::Zero(2, 2);
  v(0, 0) = 1.0;
  spec.zeros.push_back({"bad", v});
  CHECK_THROWS_AS(poincare_hopf(spec), precondition_error);
}

TEST_CASE("commuting lemma for perpendicular and parallel vectors") {
  const CliffordRep rep = build_irreducible_rep(2);
  RealVector e1(2), e2(2);
  e1 << 1, 0;
  e2 << 0, 1;
  // perpendicular: reflected vector is -B1, pure anticommutation
  CHECK(commuting_lemma_check(e1, e2, rep));
  CHECK((reflect_along(e1, e2) + e1).norm() < 1e-15);
  // parallel: reflected vector is B1 itself
  CHECK(commuting_lemma_check(e2, 3.0 * e2, rep));
  CHECK((reflect_along(e2, 3.0 * e2) - e2).norm() < 1e-15);
}

TEST_CASE("commuting lemma holds for random pairs in dims 2, 4, 6") {
  for (const int n : {2, 4, 6}) {
    CAPTURE(n);
    const CliffordRep rep = build_irreducible_rep(n);
    Rng rng(kDefaultSeed + n);
    for (int trial = 0; trial < 100; ++trial) {
      RealVector b1(n), b2(n);
      for (int j = 0; j < n; ++j) {
        b1(j) = rng.gaussian();
        b2(j) = rng.gaussian();
      }
      if (b2.norm() < 1e-6) continue;
      CHECK(commuting_lemma_check(b1, b2, rep, 1e-12));
    }
  }
}

TEST_CASE("commuting lemma rejects a zero reflector") {
  const CliffordRep rep = build_irreducible_rep(2);
  RealVector b1(2), b2 = RealVector::Zero(2);
  b1 << 1, 1;
  CHECK_THROWS_AS(commuting_lemma_check(b1, b2, rep), precondition_error);
}

TEST_CASE("pin sphere indices alternate by axis and sum to two") {
  for (const int m : {1, 2, 3}) {
    CAPTURE(m);
    const PinSphereResult r = pin_sphere_indices(m);
    REQUIRE(static_cast<int>(r.per_zero.size()) == 2 * (2 * m + 1));
    for (int axis = 1; axis <= 2 * m + 1; ++axis) {
      const int expected = (axis % 2 == 1) ? 1 : -1;  // (-1)^(axis-1)
      CHECK(r.per_zero[2 * (axis - 1)] == expected);
      CHECK(r.per_zero[2 * (axis - 1) + 1] == expected);
    }
    CHECK(r.total == 2);
  }
}

TEST_CASE("pin index survives random refactorizations") {
  Rng rng(321);
  for (const int sign : {+1, -1}) {
    PinZeroSpec spec;
    spec.v1_linearization = RealMatrix::Identity(4, 4);
    if (sign < 0) spec.v1_linearization(1, 1) = -1.0;
    for (int i = 0; i < 2; ++i) {
      RealVector v(4);
      for (int j = 0; j < 4; ++j) v(j) = rng.gaussian();
      spec.tail.push_back(v);
    }
    CAPTURE(sign);
    CHECK(pin_index_well_defined_check(spec, 20));
  }
}

TEST_CASE("pin check rejects degenerate data") {
  PinZeroSpec spec;
  spec.v1_linearization = RealMatrix::Zero(4, 4);
  CHECK_THROWS_AS(pin_index_well_defined_check(spec, 5), precondition_error);

  spec.v1_linearization = RealMatrix::Identity(4, 4);
  spec.tail.push_back(RealVector::Zero(4));
  CHECK_THROWS_AS(pin_index_well_defined_check(spec, 5), precondition_error);
}

TEST_CASE("odd-codimension volume element forces index zero") {
  const SubmanifoldReport r = submanifold_vanishing(2, 1, 1.0);
  CHECK(r.ok);
  CHECK(r.hermitian_residual <= 1e-10);
  CHECK(r.min_singular_value > 1e-8);
  CHECK(r.anticommute_residual <= 1e-10);
  CHECK(r.index == 0);
}

TEST_CASE("scaling the volume element changes nothing") {
  const SubmanifoldReport r = submanifold_vanishing(2, 1, 5.0);
  CHECK(r.ok);
  CHECK(r.index == 0);
  CHECK(r.min_singular_value == doctest::Approx(5.0));
}

TEST_CASE("rank-3 normal bundles work through the chirality power") {
  const SubmanifoldReport r = submanifold_vanishing(2, 3, 1.0);
  CHECK(r.ok);
  CHECK(r.index == 0);
}

TEST_CASE("zero volume element is a precondition error") {
  CHECK_THROWS_AS(submanifold_vanishing(2, 1, 0.0), precondition_error);
  CHECK_THROWS_AS(submanifold_vanishing(2, 2, 1.0), precondition_error);
}
