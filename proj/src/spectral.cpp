#include "diraclab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Eigenvalues>

#include "diraclab/de_rham.hpp"

namespace diraclab {

namespace {

constexpr double kMergeTol = 1e-9;

int mode_count(int n_modes) { return 2 * n_modes + 1; }

}  // namespace

SpectrumResult circle_counterexample(double s, int n_modes) {
  if (n_modes < 4)
    throw precondition_error("circle_counterexample: N must be >= 4");
  const int m = mode_count(n_modes);
  Matrix d = Matrix::Zero(m, m);
  const Complex half_i(0, 0.5);
  for (int i = 0; i < m; ++i) {
    const int k = i - n_modes;
    d(i, i) = -static_cast<double>(k);  // i d/dtheta on e^{ik theta}
    if (i + 1 < m) {
      d(i, i + 1) = s * half_i;   // sin(theta), upper band
      d(i + 1, i) = -s * half_i;  // lower band
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(d);

  SpectrumResult out;
  out.s = s;
  for (int i = 0; i < m; ++i)
    out.records.push_back({i, es.eigenvalues()(i), 0,
                           std::numeric_limits<double>::quiet_NaN()});

  // magnitude flatness of the eigenfunctions in the trusted central window;
  // coefficients of mode n decay like J_{N-|n|}(s), so keep a hard margin
  const int margin = std::max(static_cast<int>(std::ceil(2.0 * s)), 30);
  const int window = std::max(0, n_modes - margin);
  const int grid = std::max(512, 4 * n_modes);
  double worst = 0.0;
  for (int i = 0; i < m; ++i) {
    if (std::abs(es.eigenvalues()(i)) > window) continue;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (int g = 0; g < grid; ++g) {
      const double theta = 2.0 * M_PI * g / grid;
      Complex f = 0.0;
      for (int j = 0; j < m; ++j)
        f += es.eigenvectors()(j, i) *
             std::exp(Complex(0, (j - n_modes) * theta));
      const double mag = std::abs(f);
      lo = std::min(lo, mag);
      hi = std::max(hi, mag);
    }
    worst = std::max(worst, hi - lo);
  }
  out.flatness = worst;
  return out;
}

namespace {

// scalar periodic operator a*(-d^2) + diag terms of cos/sin^2 in mode space
Matrix circle_morse_block(double s, int n_modes, double cos_sign) {
  const int m = mode_count(n_modes);
  Matrix h = Matrix::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    const double k = i - n_modes;
    h(i, i) = k * k / s + s * 0.5;  // s^{-1}(-d^2) + s sin^2, constant part
    if (i + 2 < m) {
      h(i, i + 2) += -s * 0.25;  // sin^2 = (1 - cos 2theta)/2
      h(i + 2, i) += -s * 0.25;
    }
    if (i + 1 < m) {
      h(i, i + 1) += cos_sign * 0.5;
      h(i + 1, i) += cos_sign * 0.5;
    }
  }
  return h;
}

double nearest_of(const std::vector<double>& mu, double value) {
  double best = mu.front();
  for (double m : mu)
    if (std::abs(value - m) < std::abs(value - best)) best = m;
  return best;
}

void match_clusters(std::vector<EigenRecord>& records,
                    const std::vector<double>& mu, double cap, int grading) {
  if (mu.empty()) return;
  for (EigenRecord& rec : records) {
    if (rec.grading != grading || rec.eigenvalue > cap) continue;
    rec.cluster_mu = nearest_of(mu, rec.eigenvalue);
  }
}

}  // namespace

SpectrumResult circle_morse_witten(double s, int n_modes) {
  if (n_modes < 4)
    throw precondition_error("circle_morse_witten: N must be >= 4");
  if (s <= 0) throw precondition_error("circle_morse_witten: s must be > 0");

  SpectrumResult out;
  out.s = s;
  const GradedModelSpectrum model = circle_morse_model(5.0);
  for (const int grading : {+1, -1}) {
    const auto vals =
        dense_eigenvalues(circle_morse_block(s, n_modes, grading > 0 ? 1.0 : -1.0));
    const KernelCount kc = count_kernel_by_gap(vals);
    (grading > 0 ? out.ker_plus : out.ker_minus) = kc.count;
    if (grading > 0) out.threshold = kc.threshold;
    const int base = static_cast<int>(out.records.size());
    for (int i = 0; i < static_cast<int>(vals.size()); ++i)
      out.records.push_back({base + i, vals[i], grading,
                             std::numeric_limits<double>::quiet_NaN()});
  }
  match_clusters(out.records, model.mu_plus, model.mu_plus.back() + 1.0, +1);
  match_clusters(out.records, model.mu_minus, model.mu_minus.back() + 1.0, -1);
  return out;
}

GradedModelSpectrum model_spectrum(const std::vector<ModelOperator>& points,
                                   double energy_cap) {
  std::map<long, int> plus, minus;  // key = round(value / kMergeTol)
  auto insert = [&](std::map<long, int>& dst, double value) {
    dst[std::lround(value / kMergeTol)] += 1;
  };

  for (const ModelOperator& mo : points) {
    const auto q = scalar_square_form(mo.zs, 1e-8);
    if (!q || max_abs(Matrix(q->cast<Complex>()) -
                      Matrix::Identity(mo.n, mo.n)) > 1e-8)
      throw precondition_error(
          "model_spectrum: potential coefficients are not normalized");
    const GradedModule shape{mo.n, mo.rank_plus, mo.rank_minus, {}};
    for (const bool is_plus : {true, false}) {
      const Matrix block = is_plus ? shape.block_plus_plus(mo.bbar)
                                   : shape.block_minus_minus(mo.bbar);
      if (block.rows() == 0) continue;
      for (double beta : dense_eigenvalues(block)) {
        // oscillator levels n + 2t on top of each Bbar eigenvalue
        for (int t = 0;; ++t) {
          const double value = beta + mo.n + 2.0 * t;
          if (value > energy_cap) break;
          long levels = 1;  // #{k in N^n : |k|_1 = t} = C(t+n-1, n-1)
          for (int a = 1; a < mo.n; ++a) levels = levels * (t + a) / a;
          for (long c = 0; c < levels; ++c)
            insert(is_plus ? plus : minus, value);
        }
      }
    }
  }

  GradedModelSpectrum out;
  for (const auto& [key, count] : plus) {
    out.mu_plus.push_back(key * kMergeTol);
    out.p_plus.push_back(count);
  }
  for (const auto& [key, count] : minus) {
    out.mu_minus.push_back(key * kMergeTol);
    out.p_minus.push_back(count);
  }
  return out;
}

GradedModelSpectrum circle_morse_model(double energy_cap) {
  std::vector<ModelOperator> points;
  for (const double fpp : {-1.0, +1.0}) {  // f = cos: f'' = -1 at 0, +1 at pi
    ModelOperator mo;
    mo.n = 1;
    mo.rank_plus = 1;
    mo.rank_minus = 1;
    mo.bbar = Matrix::Zero(2, 2);
    mo.bbar(0, 0) = -fpp;
    mo.bbar(1, 1) = fpp;
    Matrix z = Matrix::Zero(2, 2);
    z(0, 1) = fpp;
    z(1, 0) = fpp;
    mo.zs = {z};
    points.push_back(mo);
  }
  return model_spectrum(points, energy_cap);
}

double TrigPoly2::eval(double t1, double t2) const {
  Complex v = 0.0;
  for (const Term& t : terms)
    v += t.coeff * std::exp(Complex(0, t.k1 * t1 + t.k2 * t2));
  return v.real();
}

TrigPoly2 TrigPoly2::d1() const {
  TrigPoly2 out;
  for (const Term& t : terms)
    out.terms.push_back({t.k1, t.k2, t.coeff * Complex(0, t.k1)});
  return out;
}

TrigPoly2 TrigPoly2::d2() const {
  TrigPoly2 out;
  for (const Term& t : terms)
    out.terms.push_back({t.k1, t.k2, t.coeff * Complex(0, t.k2)});
  return out;
}

TrigPoly2 TrigPoly2::sin1() {
  return {{{1, 0, Complex(0, -0.5)}, {-1, 0, Complex(0, 0.5)}}};
}

TrigPoly2 TrigPoly2::sin2() {
  return {{{0, 1, Complex(0, -0.5)}, {0, -1, Complex(0, 0.5)}}};
}

TrigPoly2 TrigPoly2::constant(double c) { return {{{0, 0, Complex(c, 0)}}}; }

TrigField2 TrigField2::standard() {
  return {TrigPoly2::sin1(), TrigPoly2::sin2()};
}

TrigField2 TrigField2::constant(double a, double b) {
  return {TrigPoly2::constant(a), TrigPoly2::constant(b)};
}

std::vector<TorusZero> torus_field_zeros(const TrigField2& field, int grid) {
  const TrigPoly2 d11 = field.v1.d1(), d12 = field.v1.d2();
  const TrigPoly2 d21 = field.v2.d1(), d22 = field.v2.d2();

  auto jacobian_at = [&](double t1, double t2) {
    RealMatrix j(2, 2);
    j(0, 0) = d11.eval(t1, t2);
    j(0, 1) = d12.eval(t1, t2);
    j(1, 0) = d21.eval(t1, t2);
    j(1, 1) = d22.eval(t1, t2);
    return j;
  };

  std::vector<TorusZero> zeros;
  const double two_pi = 2.0 * M_PI;
  for (int a = 0; a < grid; ++a) {
    for (int b = 0; b < grid; ++b) {
      double t1 = two_pi * a / grid;
      double t2 = two_pi * b / grid;
      // Newton polish from each cell corner
      bool ok = false;
      for (int it = 0; it < 40; ++it) {
        const Eigen::Vector2d f(field.v1.eval(t1, t2), field.v2.eval(t1, t2));
        if (f.norm() < 1e-12) {
          ok = true;
          break;
        }
        const RealMatrix j = jacobian_at(t1, t2);
        if (std::abs(j.determinant()) < 1e-10) break;
        const Eigen::Vector2d step = j.fullPivLu().solve(f);
        if (step.norm() > 1.5 * two_pi / grid) break;  // outside this cell's basin
        t1 -= step(0);
        t2 -= step(1);
      }
      if (!ok) continue;
      t1 = std::fmod(std::fmod(t1, two_pi) + two_pi, two_pi);
      t2 = std::fmod(std::fmod(t2, two_pi) + two_pi, two_pi);
      bool duplicate = false;
      for (const TorusZero& z : zeros) {
        const double d1 = std::min(std::abs(z.t1 - t1),
                                   two_pi - std::abs(z.t1 - t1));
        const double d2 = std::min(std::abs(z.t2 - t2),
                                   two_pi - std::abs(z.t2 - t2));
        if (d1 + d2 < 1e-6) duplicate = true;
      }
      if (duplicate) continue;
      TorusZero z;
      z.t1 = t1;
      z.t2 = t2;
      // V(x)_k = sum_j x_j V_jk: row j is the gradient of component... the
      // linearization entering the de Rham machinery is V_jk = d_j V_k
      RealMatrix jac(2, 2);
      jac(0, 0) = d11.eval(t1, t2);
      jac(1, 0) = d12.eval(t1, t2);
      jac(0, 1) = d21.eval(t1, t2);
      jac(1, 1) = d22.eval(t1, t2);
      z.jacobian = jac;
      const double det = jac.determinant();
      if (std::abs(det) < 1e-8)
        throw precondition_error("torus_field_zeros: degenerate zero");
      z.sign = det > 0 ? 1 : -1;
      zeros.push_back(z);
    }
  }
  return zeros;
}

namespace {

// sparse multiplication operator by a trig polynomial on (2N+1)^2 modes
void add_multiplication(std::vector<Eigen::Triplet<Complex>>& trip,
                        long row0, long col0, const TrigPoly2& poly,
                        Complex scale, int n_modes) {
  const int m = mode_count(n_modes);
  for (const TrigPoly2::Term& t : poly.terms) {
    for (int k1 = -n_modes; k1 <= n_modes; ++k1) {
      const int j1 = k1 - t.k1;
      if (j1 < -n_modes || j1 > n_modes) continue;
      for (int k2 = -n_modes; k2 <= n_modes; ++k2) {
        const int j2 = k2 - t.k2;
        if (j2 < -n_modes || j2 > n_modes) continue;
        const long row = row0 + (k1 + n_modes) * m + (k2 + n_modes);
        const long col = col0 + (j1 + n_modes) * m + (j2 + n_modes);
        trip.emplace_back(row, col, scale * t.coeff);
      }
    }
  }
}

void add_derivative(std::vector<Eigen::Triplet<Complex>>& trip, long row0,
                    long col0, int axis, Complex scale, int n_modes) {
  const int m = mode_count(n_modes);
  for (int k1 = -n_modes; k1 <= n_modes; ++k1)
    for (int k2 = -n_modes; k2 <= n_modes; ++k2) {
      const long idx = (k1 + n_modes) * m + (k2 + n_modes);
      const double k = axis == 0 ? k1 : k2;
      trip.emplace_back(row0 + idx, col0 + idx, scale * Complex(0, k));
    }
}

}  // namespace

std::vector<ModelOperator> torus_field_models(const TrigField2& field) {
  const GradedModule forms = de_rham_module(2);
  std::vector<ModelOperator> models;
  for (const TorusZero& zero : torus_field_zeros(field)) {
    // the flat oscillator model is exact only when the linearization is
    // orthogonal; otherwise skip cluster assignment entirely
    const RealMatrix q = zero.jacobian * zero.jacobian.transpose();
    if ((q - RealMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() > 1e-8)
      return {};
    LinearPerturbation p;
    p.n = 2;
    p.module = forms;
    p.zs = de_rham_perturbation(zero.jacobian);
    p.basepoint = RealVector::Zero(2);
    const CoordinateNormalization norm = normalize(p);
    models.push_back(ModelOperator::from_point(forms, norm.zt));
  }
  return models;
}

SpectrumResult torus_de_rham_index(const TrigField2& field, double s,
                                   int n_modes, const TorusOptions& opts) {
  if (n_modes < 8)
    throw precondition_error("torus_de_rham_index: N must be >= 8");
  if (s < 0) throw precondition_error("torus_de_rham_index: s must be >= 0");
  if (s > 0) {
    // nondegeneracy is part of the contract whenever the deformation acts
    torus_field_zeros(field, 64);
  }

  const int m = mode_count(n_modes);
  const long fields = static_cast<long>(m) * m;

  // components [0]=functions, [1]=two-forms, [2]=dtheta1, [3]=dtheta2;
  // T maps the even pair to the odd pair
  std::vector<Eigen::Triplet<Complex>> trip;
  const long c0 = 0, c2 = fields, d1 = 0, d2 = fields;

  add_derivative(trip, d1, c0, 0, 1.0, n_modes);            // du
  add_derivative(trip, d2, c0, 1, 1.0, n_modes);
  add_derivative(trip, d1, c2, 1, 1.0, n_modes);            // d* w
  add_derivative(trip, d2, c2, 0, -1.0, n_modes);
  if (s > 0) {
    add_multiplication(trip, d1, c0, field.v1, s, n_modes);  // V-flat ^ u
    add_multiplication(trip, d2, c0, field.v2, s, n_modes);
    add_multiplication(trip, d1, c2, field.v2, -s, n_modes);  // V contraction w
    add_multiplication(trip, d2, c2, field.v1, s, n_modes);
  }

  SparseMatrix t(2 * fields, 2 * fields);
  t.setFromTriplets(trip.begin(), trip.end());

  const SparseMatrix h_plus = (SparseMatrix(t.adjoint()) * t).pruned();
  const SparseMatrix h_minus = (t * SparseMatrix(t.adjoint())).pruned();

  SpectrumResult out;
  out.s = s;

  std::vector<double> mu_plus, mu_minus;
  if (s > 0) {
    const auto models = torus_field_models(field);
    if (!models.empty()) {
      const GradedModelSpectrum model = model_spectrum(models, 6.0);
      mu_plus = model.mu_plus;
      mu_minus = model.mu_minus;
    }
  }

  for (const int grading : {+1, -1}) {
    const SparseMatrix& h = grading > 0 ? h_plus : h_minus;
    const auto vals = lowest_eigenvalues(h, opts.lowest, opts.eig);
    const KernelCount kc = count_kernel_by_gap(vals);
    (grading > 0 ? out.ker_plus : out.ker_minus) = kc.count;
    if (grading > 0) out.threshold = kc.threshold;
    const int base = static_cast<int>(out.records.size());
    for (int i = 0; i < static_cast<int>(vals.size()); ++i) {
      EigenRecord rec{base + i, vals[i], grading,
                      std::numeric_limits<double>::quiet_NaN()};
      const auto& mu = grading > 0 ? mu_plus : mu_minus;
      if (s > 0 && !mu.empty() && vals[i] / s <= mu.back() + 1.0) {
        rec.cluster_mu = *std::min_element(
            mu.begin(), mu.end(), [&](double a, double b) {
              return std::abs(vals[i] / s - a) < std::abs(vals[i] / s - b);
            });
      }
      out.records.push_back(rec);
    }
  }

  if (s == 0) {
    // kernel dimensions per form degree: the Betti numbers
    std::array<int, 3> betti{0, 0, 0};
    auto count_block = [&](const SparseMatrix& h, long offset) {
      SparseMatrix blk = h.block(offset, offset, fields, fields);
      EigensolveOptions eig = opts.eig;
      const auto vals = lowest_eigenvalues(blk, 8, eig);
      int c = 0;
      for (double v : vals)
        if (v < 0.5) ++c;
      return c;
    };
    betti[0] = count_block(h_plus, 0);
    betti[2] = count_block(h_plus, fields);
    betti[1] = count_block(h_minus, 0) + count_block(h_minus, fields);
    out.betti = betti;
  }
  return out;
}

ClusterFit cluster_report(const std::vector<SpectrumResult>& sweep,
                          const GradedModelSpectrum& model, bool rescale_by_s) {
  if (sweep.size() < 3)
    throw precondition_error("cluster_report: need at least 3 sweep points");

  ClusterFit fit;
  std::vector<std::pair<double, double>> log_points;

  auto half_gap = [](const std::vector<double>& mu) {
    double g = std::numeric_limits<double>::infinity();
    for (size_t i = 1; i < mu.size(); ++i) g = std::min(g, mu[i] - mu[i - 1]);
    return mu.size() > 1 ? 0.5 * g : 0.5;
  };

  for (const SpectrumResult& res : sweep) {
    double max_dist = 0.0;
    for (const int grading : {+1, -1}) {
      const auto& mu = grading > 0 ? model.mu_plus : model.mu_minus;
      const auto& p = grading > 0 ? model.p_plus : model.p_minus;
      if (mu.empty()) continue;
      const double cap = mu.back() + half_gap(mu);
      std::vector<int> counts(mu.size(), 0);
      for (const EigenRecord& rec : res.records) {
        const bool matches_grading =
            rec.grading == grading || (rec.grading == 0 && grading > 0);
        if (!matches_grading) continue;
        double value = rec.eigenvalue;
        if (rescale_by_s) {
          if (res.s <= 0) continue;
          value /= res.s;
        }
        if (value > cap) continue;
        int nearest = 0;
        for (size_t j = 1; j < mu.size(); ++j)
          if (std::abs(value - mu[j]) < std::abs(value - mu[nearest]))
            nearest = static_cast<int>(j);
        counts[nearest] += 1;
        max_dist = std::max(max_dist, std::abs(value - mu[nearest]));
      }
      for (size_t j = 0; j < mu.size(); ++j) {
        if (counts[j] != p[j]) {
          fit.violations += 1;
          fit.notes.push_back(
              "s=" + std::to_string(res.s) + " grading=" +
              std::to_string(grading) + " mu=" + std::to_string(mu[j]) +
              ": found " + std::to_string(counts[j]) + ", expected " +
              std::to_string(p[j]));
        }
      }
      if (res.s > 0 &&
          max_dist > 0.9 * half_gap(mu))  // windows about to collide
        fit.windows_overlap = true;
    }
    if (res.s > 0) {
      fit.c_max = std::max(fit.c_max, std::pow(res.s, 0.2) * max_dist);
      if (max_dist > 1e-13)
        log_points.emplace_back(std::log(res.s), std::log(max_dist));
    }
  }

  if (log_points.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : log_points) {
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double den = log_points.size() * sxx - sx * sx;
    fit.fitted_exponent =
        den != 0 ? (log_points.size() * sxy - sx * sy) / den : 0.0;
  }
  return fit;
}

}  // namespace diraclab
