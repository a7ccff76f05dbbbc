#include "nodalfm/labels.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace nodalfm {

bool is_periodic(const Pairs& q) {
  int n = static_cast<int>(q.size());
  for (int p = 1; p < n; ++p) {
    if (n % p) continue;
    bool rep = true;
    for (int i = p; i < n && rep; ++i) rep = q[i] == q[i - p];
    if (rep) return true;
  }
  return false;
}

Pairs least_rotation(const Pairs& q) {
  Pairs best = q;
  for (std::size_t r = 1; r < q.size(); ++r) {
    Pairs c(q.begin() + r, q.end());
    c.insert(c.end(), q.begin(), q.begin() + r);
    if (c < best) best = std::move(c);
  }
  return best;
}

BandLabel BandLabel::make(Pairs q, int m, Rational lambda) {
  if (q.empty()) throw std::invalid_argument("band label needs at least one pair");
  for (auto& [a, b] : q)
    if (a < 1 || b < 1) throw std::invalid_argument("band label entries must be >= 1");
  if (m < 1) throw std::invalid_argument("band multiplicity m must be >= 1");
  if (lambda.is_zero()) throw std::invalid_argument("lambda must be nonzero");
  if (is_periodic(q)) throw std::invalid_argument("band sequence q is periodic");
  BandLabel b;
  b.q = std::move(q);
  b.m = m;
  b.lambda = std::move(lambda);
  return b;
}

BandLabel BandLabel::canonical() const {
  BandLabel b = *this;
  b.q = least_rotation(q);
  return b;
}

int BandLabel::dim() const {
  int s = 0;
  for (auto& [a, b] : q) s += a + b;
  return m * s;
}

std::string BandLabel::to_string() const {
  std::string s = "Mq[";
  for (auto& [a, b] : q) s += "(" + std::to_string(a) + "," + std::to_string(b) + ")";
  return s + ";m=" + std::to_string(m) + ";l=" + lambda.to_string() + "]";
}

StringLabel StringLabel::make(int n0, Pairs pairs, int mlast) {
  if (n0 < 0 || mlast < 0) throw std::invalid_argument("string label ends must be >= 0");
  for (auto& [a, b] : pairs)
    if (a < 0 || b < 0) throw std::invalid_argument("string label entries must be >= 0");
  bool changed = true;
  while (changed) {
    changed = false;
    if (n0 == 0 && !pairs.empty() && pairs.front().first == 0) {
      n0 = pairs.front().second;
      pairs.erase(pairs.begin());
      changed = true;
    }
    if (mlast == 0 && !pairs.empty() && pairs.back().second == 0) {
      mlast = pairs.back().first;
      pairs.pop_back();
      changed = true;
    }
  }
  for (auto& [a, b] : pairs)
    if (a < 1 || b < 1) throw std::invalid_argument("string label inner entries must be >= 1");
  StringLabel s;
  s.n0 = n0;
  s.pairs = std::move(pairs);
  s.mlast = mlast;
  return s;
}

StringLabel StringLabel::from_peaks(const Pairs& peaks) {
  if (peaks.empty()) throw std::invalid_argument("string needs at least one peak");
  return make(0, peaks, 0);
}

Pairs StringLabel::peaks() const {
  Pairs p;
  if (n0 >= 1) p.push_back({0, n0});
  p.insert(p.end(), pairs.begin(), pairs.end());
  if (mlast >= 1) p.push_back({mlast, 0});
  if (p.empty()) p.push_back({0, 0});
  return p;
}

int StringLabel::dim() const {
  int s = n0 + mlast + 1;
  for (auto& [a, b] : pairs) s += a + b;
  return s;
}

std::string StringLabel::to_string() const {
  std::string s = "Nq[" + std::to_string(n0);
  if (pairs.empty()) s += "()";
  for (auto& [a, b] : pairs) s += "(" + std::to_string(a) + "," + std::to_string(b) + ")";
  return s + std::to_string(mlast) + "]";
}

Mat jordan_block(int m, const Rational& lambda) {
  Mat j(m, m);
  for (int i = 0; i < m; ++i) {
    j(i, i) = lambda;
    if (i + 1 < m) j(i, i + 1) = Rational(1);
  }
  return j;
}

PolyPresentation band_presentation(const BandLabel& b) {
  int nn = static_cast<int>(b.q.size()), m = b.m;
  PolyPresentation p;
  p.target.assign(nn * m, PieceKind::FullR);
  p.rel.assign(nn * m, std::vector<Poly>(nn * m));
  Mat J = jordan_block(m, b.lambda);
  for (int i = 0; i < nn; ++i) {
    auto [ni, mi] = b.q[i];
    for (int k = 0; k < m; ++k) p.rel[i * m + k][i * m + k] = p.rel[i * m + k][i * m + k] + Poly::x(ni);
    // y^{m_i} couples block row i to block column i+1; the closing block carries J
    int c = (i + 1) % nn;
    for (int k = 0; k < m; ++k)
      for (int l = 0; l < m; ++l) {
        Rational coef = (i == nn - 1) ? J(k, l) : Rational(k == l ? 1 : 0);
        if (!coef.is_zero()) p.rel[i * m + k][c * m + l] = p.rel[i * m + k][c * m + l] + Poly::y(mi, coef);
      }
  }
  return p;
}

PolyPresentation string_presentation(const StringLabel& s) {
  int nn = static_cast<int>(s.pairs.size());
  PolyPresentation p;
  p.target.push_back(PieceKind::YOnly);
  for (int i = 0; i < nn; ++i) p.target.push_back(PieceKind::FullR);
  p.target.push_back(PieceKind::XOnly);
  p.rel.assign(nn + 2, std::vector<Poly>(nn + 1));
  // column j couples row j (y-power n_j) with row j+1 (x-power m_{j+1})
  for (int j = 0; j <= nn; ++j) {
    int ny = j == 0 ? s.n0 : s.pairs[j - 1].second;
    int mx = j == nn ? s.mlast : s.pairs[j].first;
    p.rel[j][j] = Poly::y(ny);
    p.rel[j + 1][j] = Poly::x(mx);
  }
  return p;
}

FiniteLengthModule band_module(const BandLabel& b) { return cokernel_stable(band_presentation(b)); }

FiniteLengthModule string_module(const StringLabel& s) { return cokernel_stable(string_presentation(s)); }

IndecLabel IndecLabel::canonical() const {
  IndecLabel c = *this;
  if (is_band) c.band = band.canonical();
  return c;
}

namespace {
auto key(const IndecLabel& l) {
  // strings before bands; within each, lexicographic on the data
  std::vector<long long> v;
  v.push_back(l.is_band);
  if (l.is_band) {
    for (auto& [a, b] : l.band.q) v.push_back(a), v.push_back(b);
    v.push_back(-1);
    v.push_back(l.band.m);
  } else {
    v.push_back(l.str.n0);
    for (auto& [a, b] : l.str.pairs) v.push_back(a), v.push_back(b);
    v.push_back(-1);
    v.push_back(l.str.mlast);
  }
  return v;
}
}  // namespace

bool operator<(const IndecLabel& a, const IndecLabel& b) {
  auto ka = key(a), kb = key(b);
  if (ka != kb) return ka < kb;
  if (a.is_band) return a.band.lambda < b.band.lambda;
  return false;
}

bool operator==(const IndecLabel& a, const IndecLabel& b) {
  if (a.is_band != b.is_band) return false;
  return a.is_band ? a.band == b.band : a.str == b.str;
}

std::vector<IndecLabel> canonical_multiset(std::vector<IndecLabel> ls) {
  for (auto& l : ls) l = l.canonical();
  std::sort(ls.begin(), ls.end());
  return ls;
}

}  // namespace nodalfm
