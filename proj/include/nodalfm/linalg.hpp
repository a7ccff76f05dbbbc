#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <type_traits>
#include <vector>

#include "nodalfm/matrix.hpp"
#include "nodalfm/modular.hpp"
#include "nodalfm/scalar.hpp"
#include "nodalfm/sparse.hpp"

namespace nodalfm {

using Mat = Matrix<Rational>;

struct RandomConfig {
  int bound = 10;   // coefficients drawn from {-bound..bound} \ {0}
  int retries = 8;
};

// Basis of {S : S X = X' S, S Y = Y' S}, each S of shape n' x n.
// Unknown S(i,k) sits at index i*n + k.
template <class F>
std::vector<Matrix<F>> intertwiner_space(const Matrix<F>& x, const Matrix<F>& y, const Matrix<F>& x2,
                                         const Matrix<F>& y2) {
  int n = x.rows(), n2 = x2.rows();
  if (!x.square() || !y.square() || y.rows() != n || !x2.square() || !y2.square() || y2.rows() != n2)
    throw std::invalid_argument("intertwiner_space: shape mismatch");
  int nv = n * n2;
  std::vector<SparseVec<F>> eqs;
  eqs.reserve(2 * static_cast<std::size_t>(nv));
  // column-sparse view of A and row-sparse view of A'
  auto add_eqs = [&](const Matrix<F>& a, const Matrix<F>& a2) {
    std::vector<std::vector<std::pair<int, F>>> acol(n), a2row(n2);
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        if (!a(k, j).is_zero()) acol[j].emplace_back(k, a(k, j));
    for (int i = 0; i < n2; ++i)
      for (int k = 0; k < n2; ++k)
        if (!a2(i, k).is_zero()) a2row[i].emplace_back(k, a2(i, k));
    for (int i = 0; i < n2; ++i)
      for (int j = 0; j < n; ++j) {
        // (S A)_{ij} - (A' S)_{ij}
        std::vector<std::pair<int, F>> e;
        for (auto& [k, v] : acol[j]) e.emplace_back(i * n + k, v);
        for (auto& [k, v] : a2row[i]) e.emplace_back(k * n + j, -v);
        auto s = make_sparse(std::move(e));
        if (!s.empty()) eqs.push_back(std::move(s));
      }
  };
  add_eqs(x, x2);
  add_eqs(y, y2);
  Matrix<F> k;
  if constexpr (std::is_same_v<F, Rational>)
    k = modular_kernel(nv, eqs);
  else
    k = sparse_kernel<F>(nv, eqs);
  std::vector<Matrix<F>> out;
  for (int c = 0; c < k.cols(); ++c) {
    Matrix<F> s(n2, n);
    for (int i = 0; i < n2; ++i)
      for (int j = 0; j < n; ++j) s(i, j) = k(i * n + j, c);
    out.push_back(std::move(s));
  }
  return out;
}

template <class F>
Matrix<F> linear_combination(const std::vector<Matrix<F>>& basis, const std::vector<long long>& coef) {
  Matrix<F> s(basis.at(0).rows(), basis.at(0).cols());
  for (std::size_t t = 0; t < basis.size(); ++t) {
    if (coef[t] == 0) continue;
    F c(coef[t]);
    for (int i = 0; i < s.rows(); ++i)
      for (int j = 0; j < s.cols(); ++j)
        if (!basis[t](i, j).is_zero()) s(i, j) += c * basis[t](i, j);
  }
  return s;
}

inline std::vector<long long> random_coefficients(std::mt19937_64& rng, std::size_t count, int bound) {
  std::uniform_int_distribution<int> dist(1, 2 * bound);
  std::vector<long long> c(count);
  for (auto& v : c) {
    int r = dist(rng);
    v = r <= bound ? r - bound - 1 : r - bound;  // skips 0
  }
  return c;
}

// Invertible combination of square basis matrices, or nullopt after
// cfg.retries samples.
template <class F>
std::optional<Matrix<F>> random_invertible_element(const std::vector<Matrix<F>>& basis, uint64_t seed,
                                                   const RandomConfig& cfg = {}) {
  if (basis.empty()) return std::nullopt;
  if (!basis[0].square()) throw std::invalid_argument("random_invertible_element: non-square basis");
  if (basis[0].rows() == 0) return basis[0];
  std::mt19937_64 rng(seed);
  for (int t = 0; t < cfg.retries; ++t) {
    Matrix<F> s = linear_combination(basis, random_coefficients(rng, basis.size(), cfg.bound));
    if (rank(s) == s.rows()) return s;
  }
  return std::nullopt;
}

}  // namespace nodalfm
