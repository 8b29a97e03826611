#include "diraclab/local_index.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace diraclab {

std::string to_string(IndexMethod m) {
  switch (m) {
    case IndexMethod::kEigenspace:
      return "eigenspace";
    case IndexMethod::kHermiteOracle:
      return "hermite_oracle";
    default:
      return "grid_oracle";
  }
}

namespace {

constexpr double kCommuteTol = 1e-10;
constexpr double kDegenerateTol = 1e-10;
constexpr double kIntegerTol = 1e-8;

// negative spectral projector of a Hermitian matrix
Matrix negative_projector(const Matrix& l) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(l);
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    if (std::abs(es.eigenvalues()(i)) < kDegenerateTol)
      throw precondition_error(
          "local_index_eigenspace: an L_j eigenvalue sits at zero; the input "
          "is degenerate");
  }
  Matrix p = Matrix::Zero(l.rows(), l.cols());
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) < 0)
      p += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  }
  return p;
}

int integer_trace(const Matrix& p) {
  const Complex tr = p.trace();
  const double rounded = std::round(tr.real());
  if (std::abs(tr.real() - rounded) > kIntegerTol ||
      std::abs(tr.imag()) > kIntegerTol)
    throw precondition_error(
        "local_index_eigenspace: projector trace is not an integer");
  return static_cast<int>(rounded);
}

}  // namespace

std::pair<Matrix, Matrix> eigenspace_projectors(const GradedModule& module,
                                                const std::vector<Matrix>& zt) {
  const int n = module.n;
  std::vector<Matrix> ls;
  ls.reserve(n);
  for (int j = 0; j < n; ++j) ls.push_back(module.action[j] * zt[j]);

  for (int j = 0; j < n; ++j) {
    if (hermiticity_residual(ls[j]) > kCommuteTol)
      throw precondition_error("local_index_eigenspace: L_j is not Hermitian");
    if (max_abs(module.block_minus_plus(ls[j])) > kCommuteTol)
      throw precondition_error(
          "local_index_eigenspace: L_j does not preserve the grading");
    for (int k = j + 1; k < n; ++k) {
      if (commutator_residual(ls[j], ls[k]) > kCommuteTol)
        throw precondition_error(
            "local_index_eigenspace: the L_j do not commute; the hypothesis "
            "fails, use an oracle method");
    }
  }

  Matrix prod_plus = Matrix::Identity(module.rank_plus, module.rank_plus);
  Matrix prod_minus = Matrix::Identity(module.rank_minus, module.rank_minus);
  std::vector<Matrix> projectors_plus, projectors_minus;
  for (int j = 0; j < n; ++j) {
    projectors_plus.push_back(negative_projector(module.block_plus_plus(ls[j])));
    projectors_minus.push_back(
        negative_projector(module.block_minus_minus(ls[j])));
  }
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      if (commutator_residual(projectors_plus[j], projectors_plus[k]) >
              kCommuteTol ||
          commutator_residual(projectors_minus[j], projectors_minus[k]) >
              kCommuteTol)
        throw precondition_error(
            "local_index_eigenspace: spectral projectors do not commute");
    }
  for (int j = 0; j < n; ++j) {
    prod_plus = prod_plus * projectors_plus[j];
    prod_minus = prod_minus * projectors_minus[j];
  }
  return {prod_plus, prod_minus};
}

LocalIndexResult local_index_eigenspace(const GradedModule& module,
                                        const std::vector<Matrix>& zt) {
  const auto [prod_plus, prod_minus] = eigenspace_projectors(module, zt);
  LocalIndexResult r;
  r.dim_ker_plus = integer_trace(prod_plus);
  r.dim_ker_minus = integer_trace(prod_minus);
  r.index = r.dim_ker_plus - r.dim_ker_minus;
  r.method = IndexMethod::kEigenspace;
  return r;
}

ModelOperator ModelOperator::from_point(const GradedModule& module,
                                        const std::vector<Matrix>& zs) {
  ModelOperator mo;
  mo.n = module.n;
  mo.rank_plus = module.rank_plus;
  mo.rank_minus = module.rank_minus;
  mo.bbar = Matrix::Zero(module.rank(), module.rank());
  for (int j = 0; j < module.n; ++j) mo.bbar += module.action[j] * zs[j];
  mo.zs = zs;
  return mo;
}

namespace {

// dense operator acting on one axis of the K^n tensor grid
RealMatrix axis_operator(int n_axes, int axis, const RealMatrix& op) {
  RealMatrix out = RealMatrix::Identity(1, 1);
  const int cutoff = static_cast<int>(op.rows());
  for (int a = 0; a < n_axes; ++a) {
    const RealMatrix& factor =
        (a == axis) ? op : RealMatrix::Identity(cutoff, cutoff).eval();
    RealMatrix next(out.rows() * factor.rows(), out.cols() * factor.cols());
    for (int i = 0; i < out.rows(); ++i)
      for (int j = 0; j < out.cols(); ++j)
        next.block(i * factor.rows(), j * factor.cols(), factor.rows(),
                   factor.cols()) = out(i, j) * factor;
    out = next;
  }
  return out;
}

RealMatrix hermite_position(int cutoff) {
  RealMatrix x = RealMatrix::Zero(cutoff, cutoff);
  for (int k = 0; k + 1 < cutoff; ++k) {
    const double v = std::sqrt((k + 1) / 2.0);
    x(k, k + 1) = v;
    x(k + 1, k) = v;
  }
  return x;
}

RealMatrix hermite_derivative(int cutoff) {
  RealMatrix d = RealMatrix::Zero(cutoff, cutoff);
  for (int k = 0; k < cutoff; ++k) {
    if (k >= 1) d(k - 1, k) = std::sqrt(k / 2.0);
    if (k + 1 < cutoff) d(k + 1, k) = -std::sqrt((k + 1) / 2.0);
  }
  return d;
}

// K^{+/-} assembled in the truncated tensor Hermite basis
Matrix assemble_model_block(const ModelOperator& mo, bool plus, int cutoff) {
  const GradedModule shape{mo.n, mo.rank_plus, mo.rank_minus, {}};
  const int r = plus ? mo.rank_plus : mo.rank_minus;
  if (r == 0) return Matrix(0, 0);

  auto block_of = [&](const Matrix& even_op) {
    return plus ? shape.block_plus_plus(even_op)
                : shape.block_minus_minus(even_op);
  };

  const int n = mo.n;
  const RealMatrix x1 = hermite_position(cutoff);
  const RealMatrix d1 = hermite_derivative(cutoff);
  const RealMatrix lap1 = d1.transpose() * d1;  // -d^2 per axis

  int grid = 1;
  for (int a = 0; a < n; ++a) grid *= cutoff;
  const Matrix ir = Matrix::Identity(r, r);

  Matrix h = Matrix::Zero(grid * r, grid * r);
  for (int j = 0; j < n; ++j)
    h += kron(axis_operator(n, j, lap1).cast<Complex>(), ir);
  h += kron(Matrix::Identity(grid, grid), block_of(mo.bbar));

  for (int j = 0; j < n; ++j) {
    for (int k = j; k < n; ++k) {
      const Matrix sym =
          0.5 * (mo.zs[j] * mo.zs[k] + mo.zs[k] * mo.zs[j]);
      const Matrix s_block = block_of(sym);
      if (max_abs(s_block) < 1e-15) continue;
      RealMatrix xpart;
      if (j == k) {
        xpart = axis_operator(n, j, (x1 * x1).eval());
      } else {
        xpart = axis_operator(n, j, x1) * axis_operator(n, k, x1) * 2.0;
      }
      h += kron(xpart.cast<Complex>(), s_block);
    }
  }
  return h;
}

std::vector<double> model_block_spectrum(const ModelOperator& mo, bool plus,
                                         int cutoff) {
  const Matrix h = assemble_model_block(mo, plus, cutoff);
  if (h.rows() == 0) return {};
  return dense_eigenvalues(h);
}

int count_below(const std::vector<double>& vals, double threshold) {
  int c = 0;
  for (double v : vals)
    if (v < threshold) ++c;
  return c;
}

}  // namespace

LocalIndexResult hermite_kernel_oracle(const ModelOperator& mo, int cutoff) {
  if (cutoff < 4)
    throw precondition_error("hermite_kernel_oracle: cutoff must be >= 4");
  LocalIndexResult r;
  r.method = IndexMethod::kHermiteOracle;
  for (const bool plus : {true, false}) {
    const auto coarse = model_block_spectrum(mo, plus, cutoff);
    const auto fine = model_block_spectrum(mo, plus, cutoff + 2);
    const int c0 = count_below(coarse, kHermiteKernelTol);
    const int c1 = count_below(fine, kHermiteKernelTol);
    if (c0 != c1)
      throw inconclusive_gap_error(
          "hermite_kernel_oracle: kernel count changed between cutoff and "
          "cutoff+2; truncation too small");
    (plus ? r.dim_ker_plus : r.dim_ker_minus) = c1;
  }
  r.index = r.dim_ker_plus - r.dim_ker_minus;
  return r;
}

GradedSpectrum hermite_low_spectrum(const ModelOperator& mo, int cutoff,
                                    double energy_cap) {
  GradedSpectrum out;
  for (const bool plus : {true, false}) {
    auto vals = model_block_spectrum(mo, plus, cutoff);
    std::vector<double>& dst = plus ? out.plus : out.minus;
    for (double v : vals)
      if (v <= energy_cap) dst.push_back(v);
  }
  return out;
}

bool FredholmConditions::ok() const {
  return elliptic_lower > 1e-8 && growth_lower > 1e-8 &&
         compat_residual <= 1e-10;
}

namespace {

// When M(sigma)^* M(sigma) = (sigma^T q sigma) 1, the pencil's smallest
// singular value over the sphere is sqrt(lambda_min(q)) exactly; sampling is
// the fallback for pencils without the scalar Gram structure.
double pencil_lower_bound(const std::vector<Matrix>& ms, int samples,
                          std::uint64_t seed) {
  const int n = static_cast<int>(ms.size());
  const int cols = static_cast<int>(ms[0].cols());
  const Matrix id = Matrix::Identity(cols, cols);
  RealMatrix q(n, n);
  bool scalar = true;
  for (int j = 0; j < n && scalar; ++j)
    for (int k = 0; k < n && scalar; ++k) {
      const Matrix sym = 0.5 * (ms[j].adjoint() * ms[k] + ms[k].adjoint() * ms[j]);
      const Complex mean = sym.trace() / static_cast<double>(cols);
      if (std::abs(mean.imag()) > 1e-10 ||
          max_abs(sym - mean * id) > 1e-10 * std::max(1.0, std::abs(mean)))
        scalar = false;
      else
        q(j, k) = mean.real();
    }
  if (scalar) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(q);
    const double lam = es.eigenvalues().minCoeff();
    return lam > 0 ? std::sqrt(lam) : 0.0;
  }
  double lo = std::numeric_limits<double>::infinity();
  for (const RealVector& sigma : sphere_points(n, samples, seed)) {
    Matrix m = Matrix::Zero(ms[0].rows(), ms[0].cols());
    for (int j = 0; j < n; ++j) m += sigma(j) * ms[j];
    lo = std::min(lo, smallest_singular_value(m));
  }
  return lo;
}

}  // namespace

FredholmConditions check_fredholm_conditions(const MatrixOperator& op,
                                             int samples, std::uint64_t seed) {
  FredholmConditions cond;
  cond.elliptic_lower = pencil_lower_bound(op.as, samples, seed);
  cond.growth_lower = pencil_lower_bound(op.bs, samples, seed);
  for (int j = 0; j < op.n(); ++j)
    for (int k = 0; k < op.n(); ++k)
      cond.compat_residual =
          std::max(cond.compat_residual,
                   max_abs(op.as[j].adjoint() * op.bs[k] -
                           op.bs[k].adjoint() * op.as[j]));
  return cond;
}

GridSpec default_grid(int n) {
  if (n == 1) return {8.0, 64};
  if (n == 2) return {6.0, 32};
  throw precondition_error("default_grid: grid oracle covers n <= 2 only");
}

namespace {

// Exact kernel-preserving reductions: y = Sx with S the square root of the
// coefficient Gram matrix equalizes the potential growth per direction, and
// dividing B by a scalar is a dilation. Both leave dim ker Q*Q and
// dim ker QQ* unchanged and keep the discretization inside its stability
// region.
MatrixOperator precondition_coordinates(const MatrixOperator& op) {
  const int n = op.n();
  const double m = static_cast<double>(op.bs[0].cols());
  RealMatrix gram(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      gram(j, k) =
          0.5 *
          ((op.bs[j].adjoint() * op.bs[k]).trace().real() +
           (op.bs[k].adjoint() * op.bs[j]).trace().real()) /
          m;
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(gram);
  if (es.eigenvalues().minCoeff() <= 1e-12)
    return op;  // degenerate pencil; let the condition check reject it
  const RealMatrix s = es.operatorSqrt();
  const RealMatrix s_inv = es.operatorInverseSqrt();

  MatrixOperator out;
  for (int mth = 0; mth < n; ++mth) {
    Matrix a = Matrix::Zero(op.as[0].rows(), op.as[0].cols());
    Matrix b = Matrix::Zero(op.bs[0].rows(), op.bs[0].cols());
    for (int j = 0; j < n; ++j) {
      a += s(mth, j) * op.as[j];
      b += s_inv(mth, j) * op.bs[j];
    }
    out.as.push_back(a);
    out.bs.push_back(b);
  }
  double beta = 0.0;
  for (const RealVector& sigma : sphere_points(n, 64, kDefaultSeed)) {
    Matrix b = Matrix::Zero(op.bs[0].rows(), op.bs[0].cols());
    for (int j = 0; j < n; ++j) b += sigma(j) * out.bs[j];
    beta = std::max(beta, b.operatorNorm());
  }
  if (beta > 0)
    for (Matrix& b : out.bs) b /= beta;
  return out;
}

}  // namespace

KernelCount count_kernel_by_gap(const std::vector<double>& ascending,
                                int examine) {
  const int q = std::min<int>(examine, static_cast<int>(ascending.size()));
  if (q == 0) return {0, 0.0};
  std::vector<double> lam(ascending.begin(), ascending.begin() + q);
  for (double& v : lam) v = std::max(v, 0.0);  // clamp discretization noise

  const double scale = std::max(lam.back(), 1e-30);
  const double floor = 1e-12 * scale;
  int best_i = 0;
  double best_ratio = 0.0;
  for (int i = 1; i < q; ++i) {
    const double ratio = lam[i] / std::max(lam[i - 1], floor);
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best_i = i;
    }
  }
  if (best_ratio >= 20.0)
    return {best_i, 0.5 * (lam[best_i - 1] + lam[best_i])};

  const double mean_gap = q > 1 ? (lam.back() - lam.front()) / (q - 1) : 0.0;
  if (q > 1 && lam.front() >= 0.5 * mean_gap) return {0, 0.5 * lam.front()};
  throw inconclusive_gap_error(
      "count_kernel_by_gap: no clear spectral gap in the examined range");
}

namespace {

// Discretization of Q*Q = -sum A_j^* A_k d_j d_k - sum A_j^* B_j + B(x)^* B(x)
// (adjoint_side swaps the roles: QQ* = -sum A_j A_k^* d_j d_k + sum A_j B_j^*
// + B B^*). Condition (3) removes every first-order term, so the squared
// operators are Schrodinger type and a central stencil is free of the
// spurious lattice modes that a first-order discretization of Q develops.
SparseMatrix discretize_squared(const MatrixOperator& op, const GridSpec& grid,
                                bool adjoint_side) {
  const int n = op.n();
  const int r = static_cast<int>(adjoint_side ? op.bs[0].rows()
                                              : op.bs[0].cols());
  const int npts = grid.points;
  const double h = 2.0 * grid.radius / (npts + 1);

  long cells = 1;
  for (int a = 0; a < n; ++a) cells *= npts;

  auto a_pair = [&](int j, int k) {  // A_j^* A_k or A_j A_k^*
    return adjoint_side ? Matrix(op.as[j] * op.as[k].adjoint())
                        : Matrix(op.as[j].adjoint() * op.as[k]);
  };
  Matrix first_order = Matrix::Zero(r, r);
  for (int j = 0; j < n; ++j)
    first_order += adjoint_side ? Matrix(op.as[j] * op.bs[j].adjoint())
                                : Matrix(-op.as[j].adjoint() * op.bs[j]);

  std::vector<long> stride(n, 1);
  for (int a = n - 2; a >= 0; --a) stride[a] = stride[a + 1] * npts;
  auto axis_index = [&](long cell, int axis) {
    return static_cast<int>((cell / stride[axis]) % npts);
  };
  auto coordinate = [&](long cell, int axis) {
    return -grid.radius + (axis_index(cell, axis) + 1) * h;
  };

  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(cells * r * r * (2 * n + 2));
  auto add_block = [&](long row_cell, long col_cell, const Matrix& blk) {
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j)
        if (blk(i, j) != Complex(0, 0))
          trip.emplace_back(row_cell * r + i, col_cell * r + j, blk(i, j));
  };

  for (long cell = 0; cell < cells; ++cell) {
    Matrix b = Matrix::Zero(op.bs[0].rows(), op.bs[0].cols());
    for (int axis = 0; axis < n; ++axis) b += coordinate(cell, axis) * op.bs[axis];
    Matrix diag = adjoint_side ? Matrix(b * b.adjoint())
                               : Matrix(b.adjoint() * b);
    diag += first_order;

    for (int axis = 0; axis < n; ++axis) {
      const Matrix lap = a_pair(axis, axis) / (h * h);
      diag += 2.0 * lap;
      if (axis_index(cell, axis) + 1 < npts)
        add_block(cell, cell + stride[axis], -lap);
      if (axis_index(cell, axis) > 0)
        add_block(cell, cell - stride[axis], -lap);
    }
    // mixed second-order terms, absent for Clifford coefficients
    for (int j = 0; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        const Matrix mixed =
            -(a_pair(j, k) + a_pair(k, j)) / (4.0 * h * h);
        if (max_abs(mixed) < 1e-15) continue;
        const int ij = axis_index(cell, j), ik = axis_index(cell, k);
        for (const int sj : {+1, -1})
          for (const int sk : {+1, -1}) {
            if (ij + sj < 0 || ij + sj >= npts || ik + sk < 0 ||
                ik + sk >= npts)
              continue;
            add_block(cell, cell + sj * stride[j] + sk * stride[k],
                      static_cast<double>(sj * sk) * mixed);
          }
      }
    }
    add_block(cell, cell, diag);
  }

  SparseMatrix out(cells * r, cells * r);
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

}  // namespace

LocalIndexResult fredholm_index_matrix(const MatrixOperator& op,
                                       const GridSpec& grid) {
  if (op.n() > 2)
    throw precondition_error(
        "fredholm_index_matrix: grid oracle is limited to n <= 2");
  const FredholmConditions cond = check_fredholm_conditions(op);
  if (!cond.ok()) {
    std::string why = "fredholm_index_matrix: ";
    if (cond.compat_residual > 1e-10)
      why += "A_j^* B_k - B_k^* A_j does not vanish";
    else if (cond.elliptic_lower <= 1e-8)
      why += "the symbol A(sigma) is not elliptic";
    else
      why += "B(x)^* B(x) has no quadratic lower bound";
    throw precondition_error(why);
  }

  const MatrixOperator scaled = precondition_coordinates(op);
  const SparseMatrix qhq = discretize_squared(scaled, grid, false);
  const SparseMatrix qqh = discretize_squared(scaled, grid, true);

  EigensolveOptions opts;
  opts.dense_cutoff = 600;
  opts.shift = -0.5;
  const int want = 12;
  const auto low_plus = lowest_eigenvalues(qhq, want, opts);
  const auto low_minus = lowest_eigenvalues(qqh, want, opts);

  LocalIndexResult r;
  r.method = IndexMethod::kGridOracle;
  r.dim_ker_plus = count_kernel_by_gap(low_plus).count;
  r.dim_ker_minus = count_kernel_by_gap(low_minus).count;
  r.index = r.dim_ker_plus - r.dim_ker_minus;
  return r;
}

LocalIndexResult fredholm_index_oracle(const GradedModule& module,
                                       const std::vector<Matrix>& zs,
                                       const GridSpec& grid) {
  MatrixOperator op;
  for (int j = 0; j < module.n; ++j) {
    op.as.push_back(module.block_minus_plus(module.action[j]));
    op.bs.push_back(module.block_minus_plus(zs[j]));
  }
  return fredholm_index_matrix(op, grid);
}

LocalIndexResult fredholm_index_oracle(const GradedModule& module,
                                       const std::vector<Matrix>& zs) {
  return fredholm_index_oracle(module, zs, default_grid(module.n));
}

bool homotopy_invariance_check(
    const std::function<MatrixOperator(double)>& path,
    const std::vector<double>& t_samples, const GridSpec& grid,
    int* index_out) {
  bool first = true;
  int reference = 0;
  for (double t : t_samples) {
    const MatrixOperator op = path(t);
    const FredholmConditions cond = check_fredholm_conditions(op);
    if (!cond.ok())
      throw precondition_error("homotopy_invariance_check: sample t=" +
                               std::to_string(t) +
                               " violates the Fredholm conditions");
    const LocalIndexResult r = fredholm_index_matrix(op, grid);
    if (first) {
      reference = r.index;
      first = false;
    } else if (r.index != reference) {
      return false;
    }
  }
  if (index_out != nullptr) *index_out = reference;
  return true;
}

long global_index(const std::vector<LinearPerturbation>& points) {
  long total = 0;
  for (size_t i = 0; i < points.size(); ++i) {
    const LinearPerturbation& p = points[i];
    try {
      const ProperReport report = check_proper(p);
      if (!report.is_proper)
        throw precondition_error("proper singular point condition fails");
      if (report.scalar_square) {
        const CoordinateNormalization norm = normalize(p);
        total += local_index_eigenspace(p.module, norm.zt).index;
      } else {
        total += fredholm_index_oracle(p.module, p.zs).index;
      }
    } catch (const inconclusive_gap_error& e) {
      throw inconclusive_gap_error("singular point #" + std::to_string(i) +
                                   ": " + e.what());
    } catch (const precondition_error& e) {
      throw precondition_error("singular point #" + std::to_string(i) + ": " +
                               e.what());
    }
  }
  return total;
}

}  // namespace diraclab
