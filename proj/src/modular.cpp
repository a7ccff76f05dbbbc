#include "nodalfm/modular.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <optional>

namespace nodalfm {

ModP ModP::inv() const {
  if (!v_) throw std::domain_error("inverse of zero");
  uint64_t e = p_ - 2;
  ModP r = raw(1), b = *this;
  for (; e; e >>= 1, b = b * b)
    if (e & 1) r = r * b;
  return r;
}

namespace {

constexpr int kMaxPrimes = 60;

const std::vector<uint64_t>& primes() {
  static const std::vector<uint64_t> ps = [] {
    std::vector<uint64_t> out;
    mpz_class p = mpz_class(1) << 61;
    for (int i = 0; i < kMaxPrimes; ++i) {
      mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
      out.push_back(p.get_ui());
    }
    return out;
  }();
  return ps;
}

// Integer rows: each equation scaled by the lcm of its denominators.
struct IntRow {
  std::vector<int> idx;
  std::vector<mpz_class> val;
};

std::vector<IntRow> integer_rows(const std::vector<SparseVec<Rational>>& eqs) {
  std::vector<IntRow> out;
  out.reserve(eqs.size());
  for (const auto& e : eqs) {
    mpz_class l = 1;
    for (auto& [i, v] : e) {
      mpz_class d = v.denominator();
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
    }
    IntRow r;
    for (auto& [i, v] : e) {
      r.idx.push_back(i);
      r.val.push_back(v.numerator() * (l / v.denominator()));
    }
    out.push_back(std::move(r));
  }
  return out;
}

struct ModKernel {
  std::vector<int> free_cols;
  std::vector<std::vector<uint64_t>> vecs;  // one per free column
};

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t p) {
  return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t p) {
  uint64_t r = 1;
  for (; e; e >>= 1, a = mulmod(a, a, p))
    if (e & 1) r = mulmod(r, a, p);
  return r;
}

// Echelon form mod p with a dense accumulator per incoming row; stored rows
// are sparse, normalised, and have their pivot at the smallest index.
ModKernel kernel_mod(int ncols, const std::vector<IntRow>& rows, uint64_t p) {
  std::vector<std::vector<std::pair<int, uint64_t>>> piv;
  std::vector<int> pivot_row(ncols, -1);
  std::vector<uint64_t> acc(ncols, 0);
  mpz_class pz, m;
  mpz_set_ui(pz.get_mpz_t(), p);
  for (const auto& r : rows) {
    int lo = ncols;
    for (std::size_t k = 0; k < r.idx.size(); ++k) {
      mpz_fdiv_r(m.get_mpz_t(), r.val[k].get_mpz_t(), pz.get_mpz_t());
      acc[r.idx[k]] = m.get_ui();
      if (acc[r.idx[k]]) lo = std::min(lo, r.idx[k]);
    }
    int c = lo;
    for (; c < ncols; ++c) {
      uint64_t a = acc[c];
      if (!a) continue;
      int pr = pivot_row[c];
      if (pr < 0) break;
      uint64_t f = p - a;
      for (auto& [k, v] : piv[pr]) {
        uint64_t t = acc[k] + mulmod(f, v, p);
        acc[k] = t >= p ? t - p : t;
      }
    }
    if (c < ncols) {
      uint64_t inv = powmod(acc[c], p - 2, p);
      std::vector<std::pair<int, uint64_t>> row;
      for (int k = c; k < ncols; ++k)
        if (acc[k]) row.emplace_back(k, mulmod(acc[k], inv, p));
      pivot_row[c] = static_cast<int>(piv.size());
      piv.push_back(std::move(row));
    }
    std::fill(acc.begin() + std::min(lo, ncols), acc.end(), 0);
  }
  ModKernel out;
  std::vector<int> order;  // pivot columns, descending
  for (int c = ncols - 1; c >= 0; --c)
    if (pivot_row[c] >= 0) order.push_back(c);
  for (int f = 0; f < ncols; ++f) {
    if (pivot_row[f] >= 0) continue;
    out.free_cols.push_back(f);
    std::vector<uint64_t> x(ncols, 0);
    x[f] = 1;
    for (int c : order) {
      const auto& row = piv[pivot_row[c]];
      unsigned __int128 s = 0;
      int n = 0;
      for (std::size_t k = 1; k < row.size(); ++k) {
        uint64_t xv = x[row[k].first];
        if (!xv) continue;
        s += static_cast<unsigned __int128>(row[k].second) * xv;
        if (++n == 32) s %= p, n = 0;
      }
      uint64_t v = static_cast<uint64_t>(s % p);
      x[c] = v ? p - v : 0;
    }
    out.vecs.push_back(std::move(x));
  }
  return out;
}

// a/b with |a|, b <= sqrt(m/2) and a = b r mod m.
std::optional<mpq_class> reconstruct(const mpz_class& r, const mpz_class& m) {
  mpz_class bound;
  mpz_class half = m / 2;
  mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
  mpz_class r0 = m, r1 = r, t0 = 0, t1 = 1;
  while (r1 > bound) {
    mpz_class q = r0 / r1;
    mpz_class r2 = r0 - q * r1, t2 = t0 - q * t1;
    r0 = r1, r1 = r2, t0 = t1, t1 = t2;
  }
  if (abs(t1) > bound || t1 == 0) return std::nullopt;
  mpq_class out(r1, t1);
  out.canonicalize();
  return out;
}

// Exact check on integer data: each column scaled to an integer vector,
// each equation to an integer row.
bool verify(const std::vector<IntRow>& rows, const std::vector<std::vector<mpq_class>>& cols) {
  for (const auto& col : cols) {
    mpz_class l = 1;
    for (const auto& q : col)
      if (q != 0) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
    std::vector<mpz_class> v(col.size());
    for (std::size_t i = 0; i < col.size(); ++i)
      if (col[i] != 0) v[i] = col[i].get_num() * (l / col[i].get_den());
    mpz_class s;
    for (const auto& r : rows) {
      s = 0;
      for (std::size_t k = 0; k < r.idx.size(); ++k) mpz_addmul(s.get_mpz_t(), r.val[k].get_mpz_t(), v[r.idx[k]].get_mpz_t());
      if (s != 0) return false;
    }
  }
  return true;
}

// Residues of the candidate columns agree with a kernel computed mod p.
bool agrees_mod(const std::vector<std::vector<mpq_class>>& cols, const ModKernel& mk, uint64_t p) {
  mpz_class pz, t;
  mpz_set_ui(pz.get_mpz_t(), p);
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < cols[j].size(); ++i) {
      const mpq_class& q = cols[j][i];
      if (q == 0) {
        if (mk.vecs[j][i]) return false;
        continue;
      }
      if (mpz_divisible_p(q.get_den_mpz_t(), pz.get_mpz_t())) return false;
      mpz_invert(t.get_mpz_t(), q.get_den_mpz_t(), pz.get_mpz_t());
      t *= q.get_num();
      mpz_fdiv_r(t.get_mpz_t(), t.get_mpz_t(), pz.get_mpz_t());
      if (t.get_ui() != mk.vecs[j][i]) return false;
    }
  return true;
}

}  // namespace

Matrix<Rational> modular_kernel(int ncols, const std::vector<SparseVec<Rational>>& eqs) {
  auto rows = integer_rows(eqs);
  const auto& ps = primes();
  std::vector<int> free_cols;
  std::vector<std::vector<mpz_class>> acc;  // residues combined so far
  mpz_class modulus = 1;
  int used = 0;
  std::optional<ModKernel> cached;
  for (std::size_t pi = 0; pi < ps.size(); ++pi) {
    ModKernel mk = cached ? std::move(*cached) : kernel_mod(ncols, rows, ps[pi]);
    cached.reset();
    if (used == 0 || mk.free_cols.size() < free_cols.size()) {
      // first prime, or the earlier ones were unlucky (rank dropped)
      free_cols = mk.free_cols;
      acc.assign(mk.vecs.size(), std::vector<mpz_class>(ncols));
      for (std::size_t j = 0; j < mk.vecs.size(); ++j)
        for (int i = 0; i < ncols; ++i) mpz_set_ui(acc[j][i].get_mpz_t(), mk.vecs[j][i]);
      mpz_set_ui(modulus.get_mpz_t(), ps[pi]);
      used = 1;
    } else if (mk.free_cols != free_cols) {
      continue;  // this prime is unlucky
    } else {
      mpz_class p;
      mpz_set_ui(p.get_mpz_t(), ps[pi]);
      mpz_class minv;
      mpz_invert(minv.get_mpz_t(), modulus.get_mpz_t(), p.get_mpz_t());
      for (std::size_t j = 0; j < acc.size(); ++j)
        for (int i = 0; i < ncols; ++i) {
          mpz_class& a = acc[j][i];
          mpz_class r;
          mpz_set_ui(r.get_mpz_t(), mk.vecs[j][i]);
          mpz_class d = r - a;
          d = d * minv;
          mpz_fdiv_r(d.get_mpz_t(), d.get_mpz_t(), p.get_mpz_t());
          a += modulus * d;
        }
      modulus *= p;
      ++used;
    }
    // try to lift; a candidate must survive one more prime before the
    // exact check
    std::vector<std::vector<mpq_class>> cols(acc.size(), std::vector<mpq_class>(ncols));
    bool ok = true;
    for (std::size_t j = 0; j < acc.size() && ok; ++j)
      for (int i = 0; i < ncols; ++i) {
        if (acc[j][i] == 0) continue;
        auto q = reconstruct(acc[j][i], modulus);
        if (!q) {
          ok = false;
          break;
        }
        cols[j][i] = *q;
      }
    if (!ok) continue;
    if (pi + 1 < ps.size()) {
      cached = kernel_mod(ncols, rows, ps[pi + 1]);
      if (cached->free_cols == free_cols && !agrees_mod(cols, *cached, ps[pi + 1])) continue;
    }
    if (verify(rows, cols)) {
      Matrix<Rational> k(ncols, static_cast<int>(cols.size()));
      for (std::size_t j = 0; j < cols.size(); ++j)
        for (int i = 0; i < ncols; ++i)
          if (cols[j][i] != 0) k(i, static_cast<int>(j)) = Rational(cols[j][i]);
      return k;
    }
  }
  return sparse_kernel<Rational>(ncols, eqs);
}

}  // namespace nodalfm
