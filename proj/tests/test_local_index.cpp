#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "diraclab/de_rham.hpp"
#include "diraclab/geometry.hpp"
#include "diraclab/local_index.hpp"
#include "support.hpp"

using namespace diraclab;

namespace {

LinearPerturbation de_rham_point(const RealMatrix& v) {
  LinearPerturbation p;
  p.n = static_cast<int>(v.rows());
  p.module = de_rham_module(p.n);
  p.zs = de_rham_perturbation(v);
  p.basepoint = RealVector::Zero(p.n);
  return p;
}

}  // namespace

TEST_CASE("source vector field has kernel on constants") {
  const LinearPerturbation p = de_rham_point(RealMatrix::Identity(2, 2));
  const LocalIndexResult r = local_index_eigenspace(p.module, normalize(p).zt);
  CHECK(r.dim_ker_plus == 1);
  CHECK(r.dim_ker_minus == 0);
  CHECK(r.index == 1);

  // the kernel is spanned by the constants: the even projector hits the
  // empty-set basis form only
  const auto [proj_plus, proj_minus] =
      eigenspace_projectors(p.module, normalize(p).zt);
  const int slot = de_rham_basis_index(2, 0u);
  CHECK(std::abs(proj_plus(slot, slot) - 1.0) < 1e-12);
  CHECK(max_abs(proj_minus) < 1e-12);
}

TEST_CASE("index -1 fields put the kernel on a one-form") {
  // the normal form -x1 d1 + x2 d2 has kernel spanned by dx1
  RealMatrix v = RealMatrix::Identity(2, 2);
  v(0, 0) = -1.0;
  const LinearPerturbation p = de_rham_point(v);
  const LocalIndexResult r = local_index_eigenspace(p.module, normalize(p).zt);
  CHECK(r.index == -1);
  const auto [proj_plus, proj_minus] =
      eigenspace_projectors(p.module, normalize(p).zt);
  const int dx1 = de_rham_basis_index(2, 1u) - p.module.rank_plus;
  CHECK(std::abs(proj_minus(dx1, dx1) - 1.0) < 1e-12);

  // the mirrored field x1 d1 - x2 d2 has it on dx2 instead
  RealMatrix w = RealMatrix::Identity(2, 2);
  w(1, 1) = -1.0;
  const LinearPerturbation q = de_rham_point(w);
  CHECK(local_index_eigenspace(q.module, normalize(q).zt).index == -1);
  const auto [qp, qm] = eigenspace_projectors(q.module, normalize(q).zt);
  const int dx2 = de_rham_basis_index(2, 2u) - q.module.rank_plus;
  CHECK(std::abs(qm(dx2, dx2) - 1.0) < 1e-12);
}

TEST_CASE("odd instances have vanishing index") {
  for (int variant = 0; variant < 10; ++variant) {
    const LinearPerturbation p =
        testing::random_proper_instance(3, variant, 1300 + variant);
    const LocalIndexResult r = local_index_eigenspace(p.module, normalize(p).zt);
    CAPTURE(variant);
    CHECK(r.index == 0);
  }
}

TEST_CASE("eigenspace path rejects non-commuting input") {
  const LinearPerturbation p = de_rham_point(RealMatrix::Identity(2, 2));
  std::vector<Matrix> bad = normalize(p).zt;
  bad[1] = p.module.action[0] * bad[0];  // not Hermitian, wrong algebra
  CHECK_THROWS_AS(local_index_eigenspace(p.module, bad), precondition_error);
}

TEST_CASE("scalar oscillator kernel counts") {
  // -d^2 + lambda + lambda^2 x^2 for lambda = -1 and +1
  for (const double lambda : {-1.0, 1.0}) {
    ModelOperator mo;
    mo.n = 1;
    mo.rank_plus = 1;
    mo.rank_minus = 0;
    mo.bbar = Matrix::Constant(1, 1, lambda);
    mo.zs = {Matrix::Constant(1, 1, lambda)};
    const LocalIndexResult r = hermite_kernel_oracle(mo, 12);
    CHECK(r.dim_ker_plus == (lambda < 0 ? 1 : 0));
    CHECK(r.dim_ker_minus == 0);
  }
}

TEST_CASE("hermite oracle matches the eigenspace formula on the source field") {
  const LinearPerturbation p = de_rham_point(RealMatrix::Identity(2, 2));
  const auto zt = normalize(p).zt;
  const LocalIndexResult r =
      hermite_kernel_oracle(ModelOperator::from_point(p.module, zt), 12);
  CHECK(r.dim_ker_plus == 1);
  CHECK(r.dim_ker_minus == 0);
  CHECK(r.index == 1);
}

TEST_CASE("model spectra of the two blocks pair off the kernel") {
  const LinearPerturbation p = de_rham_point(RealMatrix::Identity(2, 2));
  const auto zt = normalize(p).zt;
  const GradedSpectrum spec =
      hermite_low_spectrum(ModelOperator::from_point(p.module, zt), 14, 6.5);
  // supersymmetry: nonzero parts agree as multisets
  std::vector<double> plus, minus;
  for (double v : spec.plus)
    if (v > kHermiteKernelTol) plus.push_back(v);
  for (double v : spec.minus)
    if (v > kHermiteKernelTol) minus.push_back(v);
  REQUIRE(plus.size() == minus.size());
  for (size_t i = 0; i < plus.size(); ++i)
    CHECK(std::abs(plus[i] - minus[i]) < 1e-6);
}

TEST_CASE("scalar annihilation operator has index one") {
  MatrixOperator op;
  op.as = {Matrix::Identity(1, 1)};
  op.bs = {Matrix::Identity(1, 1)};
  const LocalIndexResult r = fredholm_index_matrix(op, default_grid(1));
  CHECK(r.dim_ker_plus == 1);
  CHECK(r.dim_ker_minus == 0);
  CHECK(r.index == 1);
}

TEST_CASE("grid oracle reproduces sign det for de Rham fields") {
  Rng rng(515151);
  int done = 0;
  while (done < 6) {
    RealMatrix v = rng.real_matrix(2, 2);
    const double det = v.determinant();
    Eigen::JacobiSVD<RealMatrix> svd(v);
    if (std::abs(det) < 0.3 || svd.singularValues()(1) < 0.4 ||
        svd.singularValues()(0) > 2.5)
      continue;
    ++done;
    const LinearPerturbation p = de_rham_point(v);
    const LocalIndexResult r = fredholm_index_oracle(p.module, p.zs);
    CAPTURE(done);
    CHECK(r.index == (det > 0 ? 1 : -1));
  }
}

TEST_CASE("oracle triangle on seeded instances") {
  // the acceptance suite runs the full set; this is the fast slice
  for (int variant = 0; variant < 6; ++variant) {
    const int n = 1 + variant % 2;
    const LinearPerturbation p =
        testing::random_proper_instance(n, variant, 2200 + variant);
    CAPTURE(n);
    CAPTURE(variant);
    const auto zt = normalize(p).zt;
    const LocalIndexResult eig = local_index_eigenspace(p.module, zt);
    const LocalIndexResult herm =
        hermite_kernel_oracle(ModelOperator::from_point(p.module, zt), 12);
    const LocalIndexResult grid = fredholm_index_oracle(p.module, p.zs);
    CHECK(eig.dim_ker_plus == herm.dim_ker_plus);
    CHECK(eig.dim_ker_minus == herm.dim_ker_minus);
    CHECK(eig.dim_ker_plus == grid.dim_ker_plus);
    CHECK(eig.dim_ker_minus == grid.dim_ker_minus);
  }
}

TEST_CASE("gap counting") {
  CHECK(count_kernel_by_gap({1e-8, 2.0, 2.1, 4.0}).count == 1);
  CHECK(count_kernel_by_gap({2.0, 4.0, 6.0, 8.0}).count == 0);
  CHECK(count_kernel_by_gap({1e-9, 1e-8, 2.0, 4.0}).count == 2);
  CHECK(count_kernel_by_gap({-1e-12, 2.0}).count == 1);
  CHECK_THROWS_AS(count_kernel_by_gap({0.1, 0.2, 0.4, 0.8, 1.6}),
                  inconclusive_gap_error);
}

TEST_CASE("fredholm conditions catch broken compatibility") {
  MatrixOperator op;
  op.as = {Matrix::Identity(2, 2), Matrix::Identity(2, 2)};
  Matrix b1(2, 2), b2(2, 2);
  b1 << 1, 0, 0, 1;
  b2 << 0, Complex(0, 1), Complex(0, -1), 0;
  op.bs = {b1, b2};
  // A_1^* B_2 - B_2^* A_1 = b2 - b2^* = 0 holds; break it
  op.bs[1](0, 1) = Complex(0.3, 0.7);
  const FredholmConditions cond = check_fredholm_conditions(op);
  CHECK_FALSE(cond.ok());
  CHECK_THROWS_AS(fredholm_index_matrix(op, default_grid(2)),
                  precondition_error);
}

TEST_CASE("homotopy invariance along a rotation") {
  const GradedModule forms = de_rham_module(2);
  auto path = [&](double t) {
    RealMatrix v(2, 2);
    const double a = t * M_PI / 2.0;
    v << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    MatrixOperator op;
    const auto zs = de_rham_perturbation(v);
    for (int j = 0; j < 2; ++j) {
      op.as.push_back(forms.block_minus_plus(forms.action[j]));
      op.bs.push_back(forms.block_minus_plus(zs[j]));
    }
    return op;
  };
  int index = 0;
  CHECK(homotopy_invariance_check(path, {0.0, 0.25, 0.5, 0.75, 1.0},
                                  default_grid(2), &index));
  CHECK(index == 1);
}

TEST_CASE("paths through a degeneracy are rejected") {
  const GradedModule forms = de_rham_module(2);
  auto path = [&](double t) {
    RealMatrix v = RealMatrix::Identity(2, 2);
    v(1, 1) = 1.0 - 2.0 * t;  // det = 0 at t = 1/2
    MatrixOperator op;
    const auto zs = de_rham_perturbation(v);
    for (int j = 0; j < 2; ++j) {
      op.as.push_back(forms.block_minus_plus(forms.action[j]));
      op.bs.push_back(forms.block_minus_plus(zs[j]));
    }
    return op;
  };
  CHECK_THROWS_AS(homotopy_invariance_check(path, {0.0, 0.5, 1.0},
                                            default_grid(2), nullptr),
                  precondition_error);
}

TEST_CASE("scaling the potential preserves the index") {
  MatrixOperator base;
  base.as = {Matrix::Identity(1, 1)};
  base.bs = {Matrix::Identity(1, 1)};
  auto path = [&](double t) {
    MatrixOperator op = base;
    op.bs[0] *= 1.0 + t;  // t in [0, 1]: scale from 1 to 2
    return op;
  };
  int index = 0;
  CHECK(homotopy_invariance_check(path, {0.0, 0.5, 1.0}, default_grid(1),
                                  &index));
  CHECK(index == 1);
}

TEST_CASE("global index sums the local data") {
  CHECK(global_index({}) == 0);

  std::vector<LinearPerturbation> torus;
  for (const auto& signs :
       std::vector<std::pair<double, double>>{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}) {
    RealMatrix v = RealMatrix::Zero(2, 2);
    v(0, 0) = signs.first;
    v(1, 1) = signs.second;
    torus.push_back(de_rham_point(v));
  }
  CHECK(global_index(torus) == 0);

  std::vector<LinearPerturbation> sphere(2, de_rham_point(RealMatrix::Identity(2, 2)));
  CHECK(global_index(sphere) == 2);
}

TEST_CASE("global index propagates the failing point") {
  LinearPerturbation bad = de_rham_point(RealMatrix::Identity(2, 2));
  bad.zs[1].setZero();
  std::vector<LinearPerturbation> points = {
      de_rham_point(RealMatrix::Identity(2, 2)), bad};
  try {
    global_index(points);
    FAIL("expected a precondition error");
  } catch (const precondition_error& e) {
    CHECK(std::string(e.what()).find("#1") != std::string::npos);
  }
}
