#pragma once

#include <algorithm>
#include <cassert>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace nodalfm {

// Dense row-major matrix over an exact field F. F needs +,-,*,/, unary -,
// ==, is_zero() and construction from an int.
template <class F>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int r, int c) : r_(r), c_(c), a_(static_cast<std::size_t>(r) * c, F(0)) {
    if (r < 0 || c < 0) throw std::invalid_argument("negative matrix shape");
  }
  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = F(1);
    return m;
  }
  static Matrix from_rows(const std::vector<std::vector<F>>& rows, int cols = -1) {
    int r = static_cast<int>(rows.size());
    int c = cols >= 0 ? cols : (r ? static_cast<int>(rows[0].size()) : 0);
    Matrix m(r, c);
    for (int i = 0; i < r; ++i) {
      if (static_cast<int>(rows[i].size()) != c) throw std::invalid_argument("ragged rows");
      for (int j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }
  static Matrix column(const std::vector<F>& v) {
    Matrix m(static_cast<int>(v.size()), 1);
    for (int i = 0; i < m.r_; ++i) m(i, 0) = v[i];
    return m;
  }

  int rows() const { return r_; }
  int cols() const { return c_; }
  bool square() const { return r_ == c_; }
  F& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * c_ + j]; }
  const F& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * c_ + j]; }

  bool is_zero() const {
    for (const F& x : a_)
      if (!x.is_zero()) return false;
    return true;
  }
  bool is_identity() const {
    if (r_ != c_) return false;
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j)
        if (!((*this)(i, j) == F(i == j ? 1 : 0))) return false;
    return true;
  }

  Matrix transpose() const {
    Matrix t(c_, r_);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  std::vector<F> col(int j) const {
    std::vector<F> v(r_);
    for (int i = 0; i < r_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  Matrix cols_range(int j0, int j1) const {
    Matrix m(r_, j1 - j0);
    for (int i = 0; i < r_; ++i)
      for (int j = j0; j < j1; ++j) m(i, j - j0) = (*this)(i, j);
    return m;
  }
  Matrix rows_range(int i0, int i1) const {
    Matrix m(i1 - i0, c_);
    for (int i = i0; i < i1; ++i)
      for (int j = 0; j < c_; ++j) m(i - i0, j) = (*this)(i, j);
    return m;
  }
  Matrix select_cols(const std::vector<int>& js) const {
    Matrix m(r_, static_cast<int>(js.size()));
    for (int i = 0; i < r_; ++i)
      for (std::size_t k = 0; k < js.size(); ++k) m(i, static_cast<int>(k)) = (*this)(i, js[k]);
    return m;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    check_same(a, b);
    Matrix m = a;
    for (std::size_t k = 0; k < m.a_.size(); ++k) m.a_[k] += b.a_[k];
    return m;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    check_same(a, b);
    Matrix m = a;
    for (std::size_t k = 0; k < m.a_.size(); ++k) m.a_[k] -= b.a_[k];
    return m;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.c_ != b.r_) throw std::invalid_argument("matrix product shape mismatch");
    Matrix m(a.r_, b.c_);
    for (int i = 0; i < a.r_; ++i)
      for (int k = 0; k < a.c_; ++k) {
        const F& x = a(i, k);
        if (x.is_zero()) continue;
        for (int j = 0; j < b.c_; ++j) {
          const F& y = b(k, j);
          if (!y.is_zero()) m(i, j) += x * y;
        }
      }
    return m;
  }
  friend Matrix operator*(const F& s, const Matrix& a) {
    Matrix m = a;
    for (F& x : m.a_) x = s * x;
    return m;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.r_ == b.r_ && a.c_ == b.c_ && a.a_ == b.a_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  Matrix pow(int e) const {
    if (!square()) throw std::invalid_argument("power of non-square matrix");
    Matrix r = identity(r_), b = *this;
    for (; e > 0; e >>= 1, b = b * b)
      if (e & 1) r = r * b;
    return r;
  }

  F trace() const {
    F t(0);
    for (int i = 0; i < std::min(r_, c_); ++i) t += (*this)(i, i);
    return t;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < r_; ++i) {
      os << (i ? "; " : "");
      for (int j = 0; j < c_; ++j) os << (j ? " " : "") << (*this)(i, j);
    }
    os << "]";
    return os.str();
  }

 private:
  static void check_same(const Matrix& a, const Matrix& b) {
    if (a.r_ != b.r_ || a.c_ != b.c_) throw std::invalid_argument("matrix shape mismatch");
  }
  int r_ = 0, c_ = 0;
  std::vector<F> a_;
};

template <class F>
Matrix<F> hstack(const Matrix<F>& a, const Matrix<F>& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("hstack row mismatch");
  Matrix<F> m(a.rows(), a.cols() + b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    for (int j = 0; j < b.cols(); ++j) m(i, a.cols() + j) = b(i, j);
  }
  return m;
}

template <class F>
Matrix<F> vstack(const Matrix<F>& a, const Matrix<F>& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("vstack column mismatch");
  Matrix<F> m(a.rows() + b.rows(), a.cols());
  for (int j = 0; j < a.cols(); ++j) {
    for (int i = 0; i < a.rows(); ++i) m(i, j) = a(i, j);
    for (int i = 0; i < b.rows(); ++i) m(a.rows() + i, j) = b(i, j);
  }
  return m;
}

template <class F>
Matrix<F> block_diag(const Matrix<F>& a, const Matrix<F>& b) {
  Matrix<F> m(a.rows() + b.rows(), a.cols() + b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) m(a.rows() + i, a.cols() + j) = b(i, j);
  return m;
}

// Reduced row echelon form in place; returns pivot columns.
template <class F>
std::vector<int> rref_inplace(Matrix<F>& m) {
  std::vector<int> piv;
  int r = 0;
  for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
    int p = -1;
    for (int i = r; i < m.rows(); ++i)
      if (!m(i, c).is_zero()) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != r)
      for (int j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    F inv = F(1) / m(r, c);
    for (int j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (int i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      F f = m(i, c);
      for (int j = c; j < m.cols(); ++j)
        if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
    }
    piv.push_back(c);
    ++r;
  }
  return piv;
}

// Row echelon only (no back elimination); used where only rank matters.
template <class F>
int rank(Matrix<F> m) {
  int r = 0;
  for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
    int p = -1;
    for (int i = r; i < m.rows(); ++i)
      if (!m(i, c).is_zero()) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != r)
      for (int j = c; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    F inv = F(1) / m(r, c);
    for (int i = r + 1; i < m.rows(); ++i) {
      if (m(i, c).is_zero()) continue;
      F f = m(i, c) * inv;
      for (int j = c; j < m.cols(); ++j)
        if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
    }
    ++r;
  }
  return r;
}

// Columns form a basis of the null space.
template <class F>
Matrix<F> kernel_basis(const Matrix<F>& a) {
  Matrix<F> m = a;
  std::vector<int> piv = rref_inplace(m);
  std::vector<char> is_piv(a.cols(), 0);
  for (int c : piv) is_piv[c] = 1;
  int nfree = a.cols() - static_cast<int>(piv.size());
  Matrix<F> k(a.cols(), nfree);
  int t = 0;
  for (int f = 0; f < a.cols(); ++f) {
    if (is_piv[f]) continue;
    k(f, t) = F(1);
    for (std::size_t r = 0; r < piv.size(); ++r) k(piv[r], t) = -m(static_cast<int>(r), f);
    ++t;
  }
  return k;
}

// Basis (as columns) of the column space, chosen among the columns of a.
template <class F>
Matrix<F> column_basis(const Matrix<F>& a) {
  Matrix<F> m = a;
  std::vector<int> piv = rref_inplace(m);
  return a.select_cols(piv);
}

// Some X with A X = B, if one exists.
template <class F>
std::optional<Matrix<F>> solve(const Matrix<F>& a, const Matrix<F>& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("solve shape mismatch");
  Matrix<F> m = hstack(a, b);
  std::vector<int> piv = rref_inplace(m);
  Matrix<F> x(a.cols(), b.cols());
  for (std::size_t r = 0; r < piv.size(); ++r) {
    if (piv[r] >= a.cols()) return std::nullopt;
    for (int j = 0; j < b.cols(); ++j) x(piv[r], j) = m(static_cast<int>(r), a.cols() + j);
  }
  return x;
}

template <class F>
std::optional<Matrix<F>> inverse(const Matrix<F>& a) {
  if (!a.square()) throw std::invalid_argument("inverse of non-square matrix");
  Matrix<F> m = hstack(a, Matrix<F>::identity(a.rows()));
  std::vector<int> piv = rref_inplace(m);
  if (static_cast<int>(piv.size()) < a.rows() || piv[a.rows() - 1] >= a.cols()) return std::nullopt;
  return m.cols_range(a.cols(), 2 * a.cols());
}

template <class F>
F determinant(Matrix<F> m) {
  if (!m.square()) throw std::invalid_argument("determinant of non-square matrix");
  F det(1);
  int n = m.rows();
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int i = c; i < n; ++i)
      if (!m(i, c).is_zero()) {
        p = i;
        break;
      }
    if (p < 0) return F(0);
    if (p != c) {
      for (int j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    F inv = F(1) / m(c, c);
    for (int i = c + 1; i < n; ++i) {
      if (m(i, c).is_zero()) continue;
      F f = m(i, c) * inv;
      for (int j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

// Characteristic polynomial det(tI - A), coefficients from constant term up,
// monic. Hessenberg reduction followed by the usual recurrence.
template <class F>
std::vector<F> charpoly(Matrix<F> h) {
  if (!h.square()) throw std::invalid_argument("charpoly of non-square matrix");
  int n = h.rows();
  for (int c = 0; c + 2 <= n; ++c) {
    int p = -1;
    for (int i = c + 1; i < n; ++i)
      if (!h(i, c).is_zero()) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != c + 1) {
      for (int j = 0; j < n; ++j) std::swap(h(p, j), h(c + 1, j));
      for (int i = 0; i < n; ++i) std::swap(h(i, p), h(i, c + 1));
    }
    F inv = F(1) / h(c + 1, c);
    for (int i = c + 2; i < n; ++i) {
      if (h(i, c).is_zero()) continue;
      F f = h(i, c) * inv;
      for (int j = 0; j < n; ++j) h(i, j) -= f * h(c + 1, j);
      for (int k = 0; k < n; ++k) h(k, c + 1) += f * h(k, i);
    }
  }
  // p[k] = charpoly of leading k x k block
  std::vector<std::vector<F>> p(n + 1);
  p[0] = {F(1)};
  for (int k = 1; k <= n; ++k) {
    std::vector<F> cur(k + 1, F(0));
    // t * p[k-1] - h(k-1,k-1) p[k-1]
    for (int d = 0; d < k; ++d) {
      cur[d + 1] += p[k - 1][d];
      cur[d] -= h(k - 1, k - 1) * p[k - 1][d];
    }
    F prod(1);
    for (int i = k - 1; i >= 1; --i) {
      prod *= h(i, i - 1);
      if (prod.is_zero()) break;
      F coef = prod * h(i - 1, k - 1);
      if (coef.is_zero()) continue;
      for (std::size_t d = 0; d < p[i - 1].size(); ++d) cur[d] -= coef * p[i - 1][d];
    }
    p[k] = std::move(cur);
  }
  return p[n];
}

// Subspace helpers; subspaces are given by spanning columns.
template <class F>
Matrix<F> span_sum(const Matrix<F>& a, const Matrix<F>& b) {
  return column_basis(hstack(a, b));
}

template <class F>
Matrix<F> span_intersection(const Matrix<F>& a, const Matrix<F>& b) {
  if (a.cols() == 0 || b.cols() == 0) return Matrix<F>(a.rows(), 0);
  Matrix<F> k = kernel_basis(hstack(a, F(-1) * b));
  return column_basis(a * k.rows_range(0, a.cols()));
}

// {v : M v in span(s)} for an r x n matrix M.
template <class F>
Matrix<F> preimage(const Matrix<F>& m, const Matrix<F>& s) {
  Matrix<F> k = kernel_basis(hstack(m, F(-1) * s));
  return column_basis(k.rows_range(0, m.cols()));
}

template <class F>
int span_dim(const Matrix<F>& a) {
  return rank(a);
}

}  // namespace nodalfm
