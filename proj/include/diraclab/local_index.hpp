#pragma once

#include <functional>
#include <string>
#include <vector>

#include "diraclab/eigensolver.hpp"
#include "diraclab/perturbation.hpp"

namespace diraclab {

enum class IndexMethod { kEigenspace, kHermiteOracle, kGridOracle };

std::string to_string(IndexMethod m);

struct LocalIndexResult {
  int dim_ker_plus = 0;
  int dim_ker_minus = 0;
  int index = 0;  // dim_ker_plus - dim_ker_minus
  IndexMethod method = IndexMethod::kEigenspace;
};

// Joint negative eigenspace count for the commuting Hermitian family
// L_j = c_j Zt_j, per grading block. Requires the Zt_j to anticommute and
// square to the identity; the L_j then commute, which is checked.
LocalIndexResult local_index_eigenspace(const GradedModule& module,
                                        const std::vector<Matrix>& zt);

// The negative spectral projector products restricted to E^+ and E^-.
std::pair<Matrix, Matrix> eigenspace_projectors(const GradedModule& module,
                                                const std::vector<Matrix>& zt);

// Localized harmonic oscillator K = -sum d_j^2 + Bbar + (sum x_j Z_j)^2,
// block diagonal for the grading.
struct ModelOperator {
  int n = 0;
  int rank_plus = 0;
  int rank_minus = 0;
  Matrix bbar;              // sum c_j Z_j
  std::vector<Matrix> zs;   // coefficients of the quadratic potential

  static ModelOperator from_point(const GradedModule& module,
                                  const std::vector<Matrix>& zs);
};

inline constexpr double kHermiteKernelTol = 1e-6;

// Kernel dimensions of K^+/K^- in a tensor Hermite basis truncated at
// `cutoff` levels per axis. Counts are recomputed at cutoff + 2; a change
// means the truncation is too small and is reported instead of guessed at.
LocalIndexResult hermite_kernel_oracle(const ModelOperator& mo, int cutoff = 14);

// Low spectrum of K^+/K^- below energy_cap.
struct GradedSpectrum {
  std::vector<double> plus;
  std::vector<double> minus;
};
GradedSpectrum hermite_low_spectrum(const ModelOperator& mo, int cutoff,
                                    double energy_cap);

// Q = sum A_j d_j + sum x_j B_j on C^m-valued functions.
struct MatrixOperator {
  std::vector<Matrix> as;
  std::vector<Matrix> bs;
  int n() const { return static_cast<int>(as.size()); }
};

struct FredholmConditions {
  double elliptic_lower = 0.0;    // min over sphere of smallest sv of A(sigma)
  double growth_lower = 0.0;      // same for B(sigma)
  double compat_residual = 0.0;   // max |A_j^* B_k - B_k^* A_j|
  bool ok() const;
};

FredholmConditions check_fredholm_conditions(const MatrixOperator& op,
                                             int samples = 400,
                                             std::uint64_t seed = kDefaultSeed);

struct GridSpec {
  double radius = 0.0;
  int points = 0;
};

GridSpec default_grid(int n);  // n=1: {8, 64}; n=2: {6, 32}

// Fredholm index of Q by kernel counts of the central-difference
// discretizations of Q*Q and QQ* on [-R, R]^n with zero boundary values.
// The squared operators carry no first-order terms (condition 3), which is
// what keeps the lattice free of spurious index-canceling modes.
LocalIndexResult fredholm_index_matrix(const MatrixOperator& op,
                                       const GridSpec& grid);

// Same, for the operator D(x0) = sum c_j d_j + sum x_j Z_j restricted to
// E^+ -> E^- valued functions.
LocalIndexResult fredholm_index_oracle(const GradedModule& module,
                                       const std::vector<Matrix>& zs,
                                       const GridSpec& grid);
LocalIndexResult fredholm_index_oracle(const GradedModule& module,
                                       const std::vector<Matrix>& zs);

// Kernel-count split of an ascending low spectrum at the midpoint of the
// dominant relative gap; throws inconclusive_gap_error when no gap stands
// out.
struct KernelCount {
  int count = 0;
  double threshold = 0.0;
};
KernelCount count_kernel_by_gap(const std::vector<double>& ascending,
                                int examine = 10);

// True iff every sample along the path satisfies the Fredholm conditions
// and the oracle index is constant.
bool homotopy_invariance_check(
    const std::function<MatrixOperator(double)>& path,
    const std::vector<double>& t_samples, const GridSpec& grid,
    int* index_out = nullptr);

// Sum of local indices over singular points; eigenspace route when the
// normalized form exists, discretization oracle otherwise.
long global_index(const std::vector<LinearPerturbation>& points);

}  // namespace diraclab
