#include "diraclab/de_rham.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace diraclab {

namespace {

std::vector<unsigned> subset_order(int n) {
  std::vector<unsigned> masks(1u << n);
  std::iota(masks.begin(), masks.end(), 0u);
  std::stable_sort(masks.begin(), masks.end(), [](unsigned a, unsigned b) {
    return (std::popcount(a) % 2) < (std::popcount(b) % 2);
  });
  return masks;
}

// dx_j ^ dx_I = sign * dx_{I + j}; sign counts transpositions
int wedge_sign(unsigned mask, int j) {
  const unsigned below = mask & ((1u << j) - 1u);
  return std::popcount(below) % 2 == 0 ? 1 : -1;
}

Matrix wedge_matrix(int n, int j, const std::vector<unsigned>& order,
                    const std::vector<int>& position) {
  const int dim = 1 << n;
  Matrix w = Matrix::Zero(dim, dim);
  for (unsigned mask = 0; mask < static_cast<unsigned>(dim); ++mask) {
    if (mask & (1u << j)) continue;
    const unsigned target = mask | (1u << j);
    w(position[target], position[mask]) = wedge_sign(mask, j);
  }
  return w;
}

}  // namespace

int de_rham_basis_index(int n, unsigned mask) {
  const auto order = subset_order(n);
  for (int i = 0; i < static_cast<int>(order.size()); ++i)
    if (order[i] == mask) return i;
  throw precondition_error("de_rham_basis_index: mask out of range");
}

GradedModule de_rham_module(int n) {
  const auto order = subset_order(n);
  std::vector<int> position(order.size());
  for (int i = 0; i < static_cast<int>(order.size()); ++i)
    position[order[i]] = i;

  GradedModule mod;
  mod.n = n;
  mod.rank_plus = 1 << (n - 1);
  mod.rank_minus = 1 << (n - 1);
  for (int j = 0; j < n; ++j) {
    const Matrix w = wedge_matrix(n, j, order, position);
    mod.action.push_back(w - w.adjoint());  // l(e_j) = wedge - contraction
  }
  return mod;
}

std::vector<Matrix> de_rham_perturbation(const RealMatrix& v_jk) {
  const int n = static_cast<int>(v_jk.rows());
  const auto order = subset_order(n);
  std::vector<int> position(order.size());
  for (int i = 0; i < static_cast<int>(order.size()); ++i)
    position[order[i]] = i;

  std::vector<Matrix> zs;
  for (int j = 0; j < n; ++j) {
    Matrix z = Matrix::Zero(1 << n, 1 << n);
    for (int k = 0; k < n; ++k) {
      if (v_jk(j, k) == 0.0) continue;
      const Matrix w = wedge_matrix(n, k, order, position);
      z += v_jk(j, k) * (w + w.adjoint());
    }
    zs.push_back(z);
  }
  return zs;
}

}  // namespace diraclab
