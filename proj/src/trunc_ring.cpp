#include "nodalfm/trunc_ring.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>
#include <stdexcept>

namespace nodalfm {

// ---- Poly ----

namespace {

void add_term(std::map<int, Rational>& m, int e, const Rational& v) {
  if (v.is_zero()) return;
  auto [it, inserted] = m.emplace(e, v);
  if (!inserted) {
    it->second += v;
    if (it->second.is_zero()) m.erase(it);
  }
}

std::string term(const Rational& c, const std::string& var, int e) {
  std::string mono = e == 1 ? var : var + "^" + std::to_string(e);
  if (c == Rational(1)) return mono;
  if (c == Rational(-1)) return "-" + mono;
  return c.to_string() + "*" + mono;
}

}  // namespace

Poly Poly::x(int e, Rational coef) {
  if (e == 0) return Poly(coef);
  Poly p;
  add_term(p.xs, e, coef);
  return p;
}

Poly Poly::y(int e, Rational coef) {
  if (e == 0) return Poly(coef);
  Poly p;
  add_term(p.ys, e, coef);
  return p;
}

int Poly::max_exponent() const {
  int m = 0;
  if (!xs.empty()) m = std::max(m, xs.rbegin()->first);
  if (!ys.empty()) m = std::max(m, ys.rbegin()->first);
  return m;
}

int Poly::exponent_sum() const {
  int s = 0;
  for (auto& [e, v] : xs) s += e;
  for (auto& [e, v] : ys) s += e;
  return s;
}

std::string Poly::to_string() const {
  std::vector<std::string> parts;
  if (!c.is_zero()) parts.push_back(c.to_string());
  for (auto& [e, v] : xs) parts.push_back(term(v, "x", e));
  for (auto& [e, v] : ys) parts.push_back(term(v, "y", e));
  if (parts.empty()) return "0";
  std::string s = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) s += (parts[i][0] == '-' ? "" : "+") + parts[i];
  return s;
}

Poly operator+(const Poly& a, const Poly& b) {
  Poly r = a;
  r.c += b.c;
  for (auto& [e, v] : b.xs) add_term(r.xs, e, v);
  for (auto& [e, v] : b.ys) add_term(r.ys, e, v);
  return r;
}

Poly operator*(const Rational& s, const Poly& a) {
  if (s.is_zero()) return Poly();
  Poly r;
  r.c = s * a.c;
  for (auto& [e, v] : a.xs) r.xs.emplace(e, s * v);
  for (auto& [e, v] : a.ys) r.ys.emplace(e, s * v);
  return r;
}

Poly operator-(const Poly& a, const Poly& b) { return a + Rational(-1) * b; }

Poly operator*(const Poly& a, const Poly& b) {
  Poly r;
  r.c = a.c * b.c;
  for (auto& [e, v] : a.xs) add_term(r.xs, e, v * b.c);
  for (auto& [e, v] : b.xs) add_term(r.xs, e, v * a.c);
  for (auto& [e, v] : a.ys) add_term(r.ys, e, v * b.c);
  for (auto& [e, v] : b.ys) add_term(r.ys, e, v * a.c);
  for (auto& [e1, v1] : a.xs)
    for (auto& [e2, v2] : b.xs) add_term(r.xs, e1 + e2, v1 * v2);
  for (auto& [e1, v1] : a.ys)
    for (auto& [e2, v2] : b.ys) add_term(r.ys, e1 + e2, v1 * v2);
  return r;
}

// ---- TruncElement ----

TruncElement::TruncElement(int n) : order(n), xcoeffs(n - 1), ycoeffs(n - 1) {
  if (n < 1) throw std::invalid_argument("truncation order must be >= 1");
}

TruncElement TruncElement::from_poly(int n, const Poly& p, bool* lost) {
  TruncElement t(n);
  t.constant = p.c;
  for (auto& [e, v] : p.xs) {
    if (e < n)
      t.xcoeffs[e - 1] = v;
    else if (lost)
      *lost = true;
  }
  for (auto& [e, v] : p.ys) {
    if (e < n)
      t.ycoeffs[e - 1] = v;
    else if (lost)
      *lost = true;
  }
  return t;
}

Poly TruncElement::to_poly() const {
  Poly p(constant);
  for (int e = 1; e < order; ++e) {
    if (!xcoeffs[e - 1].is_zero()) p.xs.emplace(e, xcoeffs[e - 1]);
    if (!ycoeffs[e - 1].is_zero()) p.ys.emplace(e, ycoeffs[e - 1]);
  }
  return p;
}

bool TruncElement::is_zero() const {
  if (!constant.is_zero()) return false;
  for (auto& v : xcoeffs)
    if (!v.is_zero()) return false;
  for (auto& v : ycoeffs)
    if (!v.is_zero()) return false;
  return true;
}

int TruncElement::max_exponent() const { return to_poly().max_exponent(); }

std::string TruncElement::to_string() const { return to_poly().to_string(); }

namespace {
void check_order(const TruncElement& a, const TruncElement& b) {
  if (a.order != b.order) throw std::invalid_argument("truncation order mismatch");
}
}  // namespace

TruncElement operator+(const TruncElement& a, const TruncElement& b) {
  check_order(a, b);
  TruncElement r = a;
  r.constant += b.constant;
  for (int i = 0; i + 1 < a.order; ++i) r.xcoeffs[i] += b.xcoeffs[i], r.ycoeffs[i] += b.ycoeffs[i];
  return r;
}

TruncElement operator*(const Rational& s, const TruncElement& a) {
  TruncElement r = a;
  r.constant *= s;
  for (int i = 0; i + 1 < a.order; ++i) r.xcoeffs[i] *= s, r.ycoeffs[i] *= s;
  return r;
}

TruncElement operator-(const TruncElement& a, const TruncElement& b) { return a + Rational(-1) * b; }

TruncElement operator*(const TruncElement& a, const TruncElement& b) {
  check_order(a, b);
  return TruncElement::from_poly(a.order, a.to_poly() * b.to_poly());
}

TruncElement mul(const TruncElement& a, const TruncElement& b) { return a * b; }

bool operator==(const TruncElement& a, const TruncElement& b) {
  return a.order == b.order && a.constant == b.constant && a.xcoeffs == b.xcoeffs && a.ycoeffs == b.ycoeffs;
}

std::string piece_name(PieceKind k) {
  switch (k) {
    case PieceKind::FullR: return "R";
    case PieceKind::XOnly: return "k[[x]]";
    case PieceKind::YOnly: return "k[[y]]";
  }
  return "?";
}

// ---- presentations ----

int Presentation::max_exponent() const {
  int m = 0;
  for (auto& row : rel)
    for (auto& e : row) m = std::max(m, e.max_exponent());
  return m;
}

void Presentation::check_shape() const {
  if (rel.size() != target.size()) throw std::invalid_argument("presentation: row count differs from target");
  for (auto& row : rel) {
    if (row.size() != rel[0].size()) throw std::invalid_argument("presentation: ragged relation matrix");
    for (auto& e : row)
      if (e.order != order) throw std::invalid_argument("presentation: entry order differs");
  }
}

int PolyPresentation::max_exponent() const {
  int m = 0;
  for (auto& row : rel)
    for (auto& e : row) m = std::max(m, e.max_exponent());
  return m;
}

int PolyPresentation::exponent_sum() const {
  int s = 0;
  for (auto& row : rel)
    for (auto& e : row) s += e.exponent_sum();
  return s;
}

Presentation PolyPresentation::at_order(int n) const {
  Presentation p;
  p.order = n;
  p.target = target;
  for (auto& row : rel) {
    std::vector<TruncElement> r;
    for (auto& e : row) r.push_back(TruncElement::from_poly(n, e, &p.lossy));
    p.rel.push_back(std::move(r));
  }
  return p;
}

std::string PolyPresentation::to_string() const {
  std::ostringstream os;
  for (int i = 0; i < rows(); ++i) {
    os << piece_name(target[i]) << ":";
    for (auto& e : rel[i]) os << " [" << e.to_string() << "]";
    os << "\n";
  }
  return os.str();
}

int default_order(const PolyPresentation& p) { return p.max_exponent() + p.exponent_sum() + 2; }

Presentation reorder(const Presentation& p, int n) {
  PolyPresentation q;
  q.target = p.target;
  for (auto& row : p.rel) {
    std::vector<Poly> r;
    for (auto& e : row) r.push_back(e.to_poly());
    q.rel.push_back(std::move(r));
  }
  Presentation out = q.at_order(n);
  out.lossy = out.lossy || p.lossy;
  return out;
}

namespace {

// Monomial bookkeeping for one target piece at order N.
// kind: 0 = x^e, 1 = constant, 2 = y^e (the output sort order).
struct Mono {
  int piece, kind, exp;
};

class MonomialIndex {
 public:
  MonomialIndex(const std::vector<PieceKind>& target, int n) : n_(n) {
    // Elimination order: highest degree first so that pivots land on high
    // powers and the surviving basis is low degree.
    for (int i = 0; i < static_cast<int>(target.size()); ++i) {
      bool hx = target[i] != PieceKind::YOnly, hy = target[i] != PieceKind::XOnly;
      base_.push_back(static_cast<int>(monos_.size()));
      for (int e = n - 1; e >= 1; --e) {
        if (hx) monos_.push_back({i, 0, e});
        if (hy) monos_.push_back({i, 2, e});
      }
      monos_.push_back({i, 1, 0});
      kinds_.push_back(target[i]);
    }
  }
  int size() const { return static_cast<int>(monos_.size()); }
  const Mono& mono(int k) const { return monos_[k]; }

  // index of x^e / y^e / 1 in piece i, or -1 when zero in that piece
  int index(int piece, int kind, int exp) const {
    if (kind != 1 && (exp >= n_ || exp < 1)) return -1;
    PieceKind pk = kinds_[piece];
    if (kind == 0 && pk == PieceKind::YOnly) return -1;
    if (kind == 2 && pk == PieceKind::XOnly) return -1;
    int b = base_[piece];
    int per = pk == PieceKind::FullR ? 2 : 1;
    int span = per * (n_ - 1);
    if (kind == 1) return b + span;
    int pos = (n_ - 1 - exp) * per;
    if (per == 2 && kind == 2) ++pos;
    return b + pos;
  }

  // monomial times x^a (kind 0) or y^b (kind 2) or 1
  int shift(int k, int mkind, int mexp) const {
    const Mono& m = monos_[k];
    if (mkind == 1) return k;
    if (m.kind == 1) return index(m.piece, mkind, mexp);
    if (m.kind != mkind) return -1;
    return index(m.piece, mkind, m.exp + mexp);
  }

 private:
  int n_;
  std::vector<Mono> monos_;
  std::vector<int> base_;
  std::vector<PieceKind> kinds_;
};

struct CokernelData {
  MonomialIndex idx;
  SparseEchelon<Rational> ech;
};

CokernelData reduce_image(const Presentation& p) {
  p.check_shape();
  int n = p.order;
  MonomialIndex idx(p.target, n);
  SparseEchelon<Rational> ech(idx.size());
  for (int j = 0; j < p.cols(); ++j) {
    // multipliers: 1, x^a, y^b
    std::vector<std::pair<int, int>> mults{{1, 0}};
    for (int e = 1; e < n; ++e) mults.push_back({0, e}), mults.push_back({2, e});
    for (auto [mk, me] : mults) {
      std::vector<std::pair<int, Rational>> v;
      for (int i = 0; i < p.rows(); ++i) {
        const TruncElement& t = p.rel[i][j];
        auto push = [&](int kind, int exp, const Rational& c) {
          if (c.is_zero()) return;
          int k = idx.index(i, kind, exp);
          if (k < 0) return;
          int s = idx.shift(k, mk, me);
          if (s >= 0) v.emplace_back(s, c);
        };
        push(1, 0, t.constant);
        for (int e = 1; e < n; ++e) {
          push(0, e, t.xcoeffs[e - 1]);
          push(2, e, t.ycoeffs[e - 1]);
        }
      }
      ech.add(make_sparse(std::move(v)));
    }
  }
  return {std::move(idx), std::move(ech)};
}

}  // namespace

FiniteLengthModule cokernel(const Presentation& p) {
  if (p.lossy) throw std::invalid_argument("cokernel: truncation order does not exceed the relation exponents");
  auto data = reduce_image(p);
  const auto& idx = data.idx;
  const auto& ech = data.ech;
  std::vector<int> basis;
  for (int k = 0; k < idx.size(); ++k)
    if (!ech.is_pivot(k)) basis.push_back(k);
  std::sort(basis.begin(), basis.end(), [&](int a, int b) {
    const Mono &u = idx.mono(a), &v = idx.mono(b);
    return std::tie(u.piece, u.kind, u.exp) < std::tie(v.piece, v.kind, v.exp);
  });
  std::vector<int> pos(idx.size(), -1);
  for (std::size_t t = 0; t < basis.size(); ++t) pos[basis[t]] = static_cast<int>(t);
  int d = static_cast<int>(basis.size());
  Mat X(d, d), Y(d, d);
  for (int j = 0; j < d; ++j) {
    for (int which = 0; which < 2; ++which) {
      int s = idx.shift(basis[j], which == 0 ? 0 : 2, 1);
      if (s < 0) continue;
      auto v = ech.reduce({{s, Rational(1)}});
      Mat& A = which == 0 ? X : Y;
      for (auto& [k, c] : v) A(pos[k], j) = c;
    }
  }
  return FiniteLengthModule(std::move(X), std::move(Y));
}

namespace {
int cokernel_dim(const Presentation& p) {
  auto data = reduce_image(p);
  return data.idx.size() - data.ech.rank();
}
}  // namespace

FiniteLengthModule cokernel_stable(const PolyPresentation& p, int* order_used) {
  int n = p.max_exponent() + 1;
  int cap = std::max(default_order(p), n + 1);
  int dn = cokernel_dim(p.at_order(n));
  while (true) {
    int dn1 = cokernel_dim(p.at_order(n + 1));
    if (dn1 == dn) break;
    ++n;
    dn = dn1;
    if (n > cap) throw std::runtime_error("cokernel_stable: cokernel does not stabilise (infinite length?)");
  }
  if (order_used) *order_used = n;
  return cokernel(p.at_order(n));
}

bool stability_check(const Presentation& p, uint64_t seed) {
  if (p.lossy) return false;
  FiniteLengthModule a = cokernel(p);
  FiniteLengthModule b = cokernel(reorder(p, p.order + 1));
  return is_isomorphic(a, b, seed).isomorphic();
}

namespace {

TruncElement unit_inverse(const TruncElement& u) {
  // u = c(1 + t), t nilpotent of order < N in each variable
  Rational ci = u.constant.inv();
  TruncElement t = ci * u;
  t.constant = 0;
  TruncElement one(u.order), r(u.order), pw(u.order);
  one.constant = 1;
  r = one;
  pw = one;
  for (int k = 1; k < u.order; ++k) {
    pw = Rational(-1) * (pw * t);
    r = r + pw;
  }
  return ci * r;
}

}  // namespace

Presentation minimal_presentation(const Presentation& p0) {
  p0.check_shape();
  Presentation p = p0;
  while (true) {
    int pi = -1, pj = -1;
    for (int i = 0; i < p.rows() && pi < 0; ++i)
      for (int j = 0; j < p.cols(); ++j)
        if (p.rel[i][j].is_unit()) {
          pi = i, pj = j;
          break;
        }
    if (pi < 0) break;
    TruncElement uinv = unit_inverse(p.rel[pi][pj]);
    for (int k = 0; k < p.cols(); ++k) {
      if (k == pj || p.rel[pi][k].is_zero()) continue;
      TruncElement f = p.rel[pi][k] * uinv;
      for (int i = 0; i < p.rows(); ++i) p.rel[i][k] = p.rel[i][k] - f * p.rel[i][pj];
    }
    PieceKind kind = p.target[pi];
    p.target.erase(p.target.begin() + pi);
    p.rel.erase(p.rel.begin() + pi);
    if (kind == PieceKind::FullR) {
      for (auto& row : p.rel) row.erase(row.begin() + pj);
    } else {
      // the killed generator was x-only (resp. y-only): its y (resp. x)
      // multiple vanishes, which becomes the new relation
      TruncElement m(p.order);
      if (kind == PieceKind::XOnly)
        m.ycoeffs.at(0) = 1;
      else
        m.xcoeffs.at(0) = 1;
      if (p.order < 2) {
        for (auto& row : p.rel) row.erase(row.begin() + pj);
        continue;
      }
      for (auto& row : p.rel) row[pj] = m * row[pj];
    }
  }
  // drop columns that became zero
  for (int j = p.cols() - 1; j >= 0; --j) {
    bool zero = true;
    for (auto& row : p.rel) zero = zero && row[j].is_zero();
    if (zero)
      for (auto& row : p.rel) row.erase(row.begin() + j);
  }
  return p;
}

}  // namespace nodalfm
