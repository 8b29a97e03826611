#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "diraclab/local_index.hpp"

namespace diraclab {

// One retained eigenvalue of a global simulation; grading +1/-1 for the
// even/odd part, 0 for ungraded operators; cluster_mu is the model
// eigenvalue the value was matched to (NaN when unmatched).
struct EigenRecord {
  int k = 0;
  double eigenvalue = 0.0;
  int grading = 0;
  double cluster_mu = std::numeric_limits<double>::quiet_NaN();
};

struct SpectrumResult {
  double s = 0.0;
  std::vector<EigenRecord> records;
  int ker_plus = 0;
  int ker_minus = 0;
  double threshold = 0.0;  // kernel-count threshold actually used
  double flatness = std::numeric_limits<double>::quiet_NaN();  // counterexample
  std::optional<std::array<int, 3>> betti;  // torus, s = 0 only

  int index() const { return ker_plus - ker_minus; }
};

// Fourier discretization of D_s = i d/dtheta + s sin(theta) on the circle
// with modes -N..N. The true eigenvalues are the integers for every s, and
// the eigenfunctions have constant magnitude: no localization occurs.
SpectrumResult circle_counterexample(double s, int n_modes);

// Witten deformation for f = cos(theta) on the circle: spectrum of
// H_s = s^{-1} D_s^2 on functions (+) and one-forms (-).
SpectrumResult circle_morse_witten(double s, int n_modes);

// Model eigenvalue lists with multiplicities, per grading.
struct GradedModelSpectrum {
  std::vector<double> mu_plus;
  std::vector<int> p_plus;
  std::vector<double> mu_minus;
  std::vector<int> p_minus;
};

// Spectrum of the direct sum of localized oscillators K = sum of
// (-d_j^2 + x_j^2) + Bbar over the given points, valid when the potential
// coefficients are normalized (Z_j Z_k + Z_k Z_j = 2 delta_jk).
GradedModelSpectrum model_spectrum(const std::vector<ModelOperator>& points,
                                   double energy_cap);

// The two-oscillator model for f = cos(theta).
GradedModelSpectrum circle_morse_model(double energy_cap);

// Real trigonometric polynomial on T^2.
struct TrigPoly2 {
  struct Term {
    int k1 = 0;
    int k2 = 0;
    Complex coeff;
  };
  std::vector<Term> terms;

  double eval(double t1, double t2) const;
  TrigPoly2 d1() const;
  TrigPoly2 d2() const;
  static TrigPoly2 sin1();
  static TrigPoly2 sin2();
  static TrigPoly2 constant(double c);
};

struct TrigField2 {
  TrigPoly2 v1, v2;
  static TrigField2 standard();        // (sin t1, sin t2)
  static TrigField2 constant(double a, double b);
};

struct TorusZero {
  double t1 = 0.0, t2 = 0.0;
  RealMatrix jacobian;
  int sign = 0;
};

// Nondegenerate zeros of the field, by grid sampling plus Newton polish.
std::vector<TorusZero> torus_field_zeros(const TrigField2& field,
                                         int grid = 96);

struct TorusOptions {
  int lowest = 20;
  // shift-invert iteration beats the dense solve well below 5000 rows here
  EigensolveOptions eig = [] {
    EigensolveOptions e;
    e.dense_cutoff = 2000;
    return e;
  }();
};

// Graded small-eigenvalue counts of D_s^2 on complex forms over the flat
// T^2, Fourier modes (2N+1)^2 per component. At s = 0 the kernel dimensions
// per form degree (the Betti numbers) are reported as well.
SpectrumResult torus_de_rham_index(const TrigField2& field, double s,
                                   int n_modes, const TorusOptions& opts = {});

// Per-zero model for the torus field (for cluster comparison, H_s units).
std::vector<ModelOperator> torus_field_models(const TrigField2& field);

struct ClusterFit {
  double c_max = 0.0;          // max over sweep of s^{1/5} * matched distance
  double fitted_exponent = 0.0;
  int violations = 0;          // per-window multiplicity mismatches
  bool windows_overlap = false;
  std::vector<std::string> notes;
};

// Matches low eigenvalues of each sweep member to the model eigenvalues and
// checks multiplicities. Eigenvalues are taken in H_s units; pass
// rescale_by_s = true when the records hold D_s^2 values.
ClusterFit cluster_report(const std::vector<SpectrumResult>& sweep,
                          const GradedModelSpectrum& model,
                          bool rescale_by_s = false);

}  // namespace diraclab
