#pragma once

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "nodalfm/matrix.hpp"

namespace nodalfm {

template <class F>
using SparseVec = std::vector<std::pair<int, F>>;  // sorted by index, no zeros

template <class F>
SparseVec<F> sparse_axpy(const SparseVec<F>& a, const F& s, const SparseVec<F>& b) {
  // a + s*b
  SparseVec<F> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, s * b[j].second);
      ++j;
    } else {
      F v = a[i].second + s * b[j].second;
      if (!v.is_zero()) out.emplace_back(a[i].first, std::move(v));
      ++i, ++j;
    }
  }
  return out;
}

// Incremental echelon form of a row space. Each stored row has its pivot at
// its smallest index and is normalised there, so reduction of a new row
// sweeps upward through the indices and terminates.
template <class F>
class SparseEchelon {
 public:
  explicit SparseEchelon(int ncols) : n_(ncols), pivot_row_(ncols, -1) {}

  int ncols() const { return n_; }
  int rank() const { return static_cast<int>(rows_.size()); }

  SparseVec<F> reduce(SparseVec<F> v) const {
    std::size_t k = 0;
    while (k < v.size()) {
      int c = v[k].first;
      int pr = pivot_row_[c];
      if (pr < 0) {
        ++k;
        continue;
      }
      F s = -v[k].second;
      v = sparse_axpy(v, s, rows_[pr]);
      // entries before position k are untouched and unpivoted
    }
    return v;
  }

  // Returns true if v was independent of the rows so far.
  bool add(SparseVec<F> v) {
    v = reduce(std::move(v));
    if (v.empty()) return false;
    F inv = F(1) / v[0].second;
    for (auto& e : v) e.second *= inv;
    pivot_row_[v[0].first] = static_cast<int>(rows_.size());
    rows_.push_back(std::move(v));
    return true;
  }

  bool is_pivot(int c) const { return pivot_row_[c] >= 0; }

  // Basis of {x : r.x = 0 for all rows r}, one vector per free column.
  std::vector<std::vector<F>> kernel() const {
    std::vector<int> order;  // pivot columns, descending
    for (int c = n_ - 1; c >= 0; --c)
      if (pivot_row_[c] >= 0) order.push_back(c);
    std::vector<std::vector<F>> out;
    for (int f = 0; f < n_; ++f) {
      if (pivot_row_[f] >= 0) continue;
      std::vector<F> x(n_, F(0));
      x[f] = F(1);
      for (int c : order) {
        const auto& row = rows_[pivot_row_[c]];
        F s(0);
        for (std::size_t k = 1; k < row.size(); ++k)
          if (!x[row[k].first].is_zero()) s -= row[k].second * x[row[k].first];
        x[c] = s;
      }
      out.push_back(std::move(x));
    }
    return out;
  }

  const std::vector<SparseVec<F>>& rows() const { return rows_; }

 private:
  int n_;
  std::vector<int> pivot_row_;
  std::vector<SparseVec<F>> rows_;
};

// Null space of a sparse system given row by row, returned as matrix columns.
template <class F>
Matrix<F> sparse_kernel(int ncols, const std::vector<SparseVec<F>>& eqs) {
  SparseEchelon<F> ech(ncols);
  for (const auto& e : eqs) ech.add(e);
  auto ks = ech.kernel();
  Matrix<F> m(ncols, static_cast<int>(ks.size()));
  for (std::size_t j = 0; j < ks.size(); ++j)
    for (int i = 0; i < ncols; ++i) m(i, static_cast<int>(j)) = ks[j][i];
  return m;
}

// Builds a SparseVec from (index, value) pairs that may repeat or be zero.
template <class F>
SparseVec<F> make_sparse(std::vector<std::pair<int, F>> v) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVec<F> out;
  for (auto& e : v) {
    if (!out.empty() && out.back().first == e.first)
      out.back().second += e.second;
    else
      out.push_back(std::move(e));
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](const auto& e) { return e.second.is_zero(); }),
            out.end());
  return out;
}

}  // namespace nodalfm
