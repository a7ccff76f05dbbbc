#include "nodalfm/identify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>

namespace nodalfm {

namespace {

constexpr int kSplitTries = 6;
constexpr std::size_t kMaxCandidates = 400;

}  // namespace

int radical_dim(const std::vector<Mat>& basis) {
  int h = static_cast<int>(basis.size());
  if (h == 0) return 0;
  int n = basis[0].rows();
  // The radical is the kernel of the trace form. Scaling each basis element
  // by a nonzero constant keeps that dimension, so work with integer
  // matrices and hand the Gram system to the multimodular kernel.
  std::vector<std::vector<mpz_class>> ints(h, std::vector<mpz_class>(static_cast<std::size_t>(n) * n));
  for (int i = 0; i < h; ++i) {
    mpz_class l = 1;
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        if (!basis[i](p, q).is_zero()) {
          mpz_class d = basis[i](p, q).denominator();
          mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
        }
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        if (!basis[i](p, q).is_zero())
          ints[i][p * n + q] = basis[i](p, q).numerator() * (l / basis[i](p, q).denominator());
  }
  std::vector<SparseVec<Rational>> rows;
  mpz_class t;
  for (int i = 0; i < h; ++i) {
    std::vector<std::pair<int, Rational>> row;
    for (int j = 0; j < h; ++j) {
      t = 0;
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
          const mpz_class& a = ints[i][p * n + q];
          if (a == 0) continue;
          const mpz_class& b = ints[j][q * n + p];
          if (b != 0) mpz_addmul(t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        }
      if (t != 0) row.emplace_back(j, Rational(mpq_class(t)));
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return modular_kernel(h, rows).cols();
}

namespace {

// Basis of words in X and Y applied to a top chosen among the standard
// vectors. In it most columns of X and Y are unit vectors, which keeps the
// entries small after a scrambling change of basis.
FiniteLengthModule word_basis(const FiniteLengthModule& m) {
  int n = m.dim;
  if (n <= 1) return m;
  SparseEchelon<Rational> span(n);
  Mat rad = column_basis(hstack(m.X, m.Y));
  for (int c = 0; c < rad.cols(); ++c) {
    SparseVec<Rational> v;
    for (int i = 0; i < n; ++i)
      if (!rad(i, c).is_zero()) v.emplace_back(i, rad(i, c));
    span.add(std::move(v));
  }
  std::vector<std::vector<Rational>> basis;
  SparseEchelon<Rational> chosen(n);
  auto take = [&](const std::vector<Rational>& v) {
    SparseVec<Rational> sv;
    for (int i = 0; i < n; ++i)
      if (!v[i].is_zero()) sv.emplace_back(i, v[i]);
    if (!chosen.add(std::move(sv))) return false;
    basis.push_back(v);
    return true;
  };
  for (int i = 0; i < n && span.rank() < n; ++i) {
    if (!span.add({{i, Rational(1)}})) continue;
    std::vector<Rational> e(n, Rational(0));
    e[i] = Rational(1);
    take(e);
  }
  for (std::size_t k = 0; k < basis.size() && static_cast<int>(basis.size()) < n; ++k)
    for (const Mat* a : {&m.X, &m.Y}) {
      std::vector<Rational> v(n, Rational(0));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (!(*a)(i, j).is_zero() && !basis[k][j].is_zero()) v[i] += (*a)(i, j) * basis[k][j];
      take(v);
    }
  if (static_cast<int>(basis.size()) != n) return m;  // cannot happen for a module over R
  Mat b(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) b(i, j) = basis[j][i];
  return conjugate(m, b);
}

// Generalised eigenspaces of a random endomorphism for its rational
// eigenvalues, plus the complementary Fitting component. Empty when no
// useful split was found.
std::vector<Mat> fitting_split(const FiniteLengthModule& w, const std::vector<Mat>& endo, std::mt19937_64& rng) {
  int n = w.dim;
  // Sparse candidates first: kernel-basis elements and pairwise sums tend to
  // have rational eigenvalues, random combinations on a matrix algebra do not.
  std::vector<Mat> cands(endo.begin(), endo.end());
  for (std::size_t i = 0; i < endo.size() && cands.size() < 4 * endo.size(); ++i)
    for (std::size_t j = i + 1; j < endo.size() && j < i + 4; ++j) cands.push_back(endo[i] + endo[j]);
  for (int t = 0; t < kSplitTries; ++t) cands.push_back(linear_combination(endo, random_coefficients(rng, endo.size(), 10)));
  for (const Mat& phi : cands) {
    UPoly cp = charpoly(phi);
    UPoly sf = upoly_squarefree_part(cp);
    if (sf.size() <= 2) continue;  // a single eigenvalue: no split from this element
    auto roots = upoly_rational_roots(sf);
    if (roots.empty()) continue;
    std::vector<Mat> parts;
    Mat rest = Mat::identity(n);
    for (const auto& c : roots) {
      // a^k for k past the largest Jordan block at c, found by rank stabilising
      Mat a = phi - c * Mat::identity(n);
      Mat p = a;
      for (int r = rank(p);;) {
        Mat q = p * a;
        int rq = rank(q);
        if (rq == r) break;
        p = std::move(q), r = rq;
      }
      parts.push_back(kernel_basis(p));
      rest = rest * p;
    }
    Mat img = column_basis(rest);
    if (img.cols() > 0) parts.push_back(img);
    return parts;
  }
  return {};
}

void split_rec(const FiniteLengthModule& w0, std::mt19937_64& rng, std::vector<Block>& out) {
  if (w0.dim == 0) return;
  FiniteLengthModule w = word_basis(w0);
  if (w.dim == 1) {
    out.push_back({w, 1, 1});
    return;
  }
  auto endo = end_space(w);
  if (endo.size() == 1) {
    out.push_back({w, 1, 1});
    return;
  }
  // End/rad = Q means a local endomorphism ring
  int s = static_cast<int>(endo.size()) - radical_dim(endo);
  if (s == 1) {
    out.push_back({w, 1, 1});
    return;
  }
  auto parts = fitting_split(w, endo, rng);
  if (parts.size() >= 2) {
    for (const auto& b : parts) split_rec(restrict_to(w, b), rng, out);
    return;
  }
  int k = static_cast<int>(std::lround(std::sqrt(static_cast<double>(s))));
  out.push_back({w, k * k == s ? k : 0, s});
}

}  // namespace

std::vector<Block> split_module(const FiniteLengthModule& m, uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<Block> out;
  split_rec(m, rng, out);
  return out;
}

PeakValleyData peaks_and_valleys(const FiniteLengthModule& m) {
  int n = m.dim;
  int ix = nilpotency_index(m.X), iy = nilpotency_index(m.Y);
  std::vector<Mat> xp{Mat::identity(n)}, yp{Mat::identity(n)};
  for (int k = 1; k <= ix + 1; ++k) xp.push_back(xp.back() * m.X);
  for (int k = 1; k <= iy + 1; ++k) yp.push_back(yp.back() * m.Y);
  Mat rad = span_sum(m.X, m.Y);
  int drad = rad.cols();
  Mat soc = kernel_basis(vstack(m.X, m.Y));
  // G(a,b) for 0 <= a <= ix+1, 0 <= b <= iy+1
  std::vector<std::vector<int>> G(ix + 2, std::vector<int>(iy + 2)), H(ix + 3, std::vector<int>(iy + 3, 0));
  for (int a = 0; a <= ix + 1; ++a)
    for (int b = 0; b <= iy + 1; ++b) {
      Mat k = kernel_basis(vstack(xp[a], yp[b]));
      G[a][b] = rank(hstack(k, rad)) - drad;
    }
  for (int a = 0; a <= ix + 1; ++a)
    for (int b = 0; b <= iy + 1; ++b) {
      Mat s = span_intersection(soc, column_basis(xp[a]));
      s = span_intersection(s, column_basis(yp[b]));
      H[a][b] = s.cols();
    }
  PeakValleyData d;
  for (int a = 0; a <= ix; ++a)
    for (int b = 0; b <= iy; ++b) {
      int p = G[a + 1][b + 1] - G[a][b + 1] - G[a + 1][b] + G[a][b];
      if (p) d.peaks.push_back({{a, b}, p});
      int v = H[a][b] - H[a + 1][b] - H[a][b + 1] + H[a + 1][b + 1];
      if (v) d.valleys.push_back({{a, b}, v});
    }
  return d;
}

namespace {

// Linear relation on V, the span of the columns of [U; W].
struct Relation {
  Mat U, W;
};

Relation rel_basis(const Mat& u, const Mat& w) {
  Mat s = column_basis(vstack(u, w));
  return {s.rows_range(0, u.rows()), s.rows_range(u.rows(), s.rows())};
}

Relation compose(const Relation& r1, const Relation& r2) {
  // (u,v) in r1, (v,w) in r2
  Mat k = kernel_basis(hstack(r1.W, Rational(-1) * r2.U));
  int a = r1.W.cols();
  return rel_basis(r1.U * k.rows_range(0, a), r2.W * k.rows_range(a, k.rows()));
}

Mat rel_image(const Relation& r, const Mat& s) {
  int n = r.U.rows();
  if (s.cols() == 0) {
    Mat k = kernel_basis(r.U);
    return column_basis(r.W * k);
  }
  Mat k = kernel_basis(hstack(r.U, Rational(-1) * s));
  Mat out = r.W * k.rows_range(0, r.U.cols());
  return out.cols() ? column_basis(out) : Mat(n, 0);
}

Mat rel_preimage(const Relation& r, const Mat& s) { return rel_image({r.W, r.U}, s); }

template <class Step>
Mat iterate_to_limit(Mat s, Step step) {
  while (true) {
    Mat t = step(s);
    if (t.cols() == s.cols()) return t;
    s = std::move(t);
  }
}

}  // namespace

UPoly transfer_charpoly(const FiniteLengthModule& m, const Pairs& q, int* regular_dim) {
  int n = m.dim, r = static_cast<int>(q.size());
  std::optional<Relation> c;
  for (int j = 0; j < r; ++j) {
    int mj = q[j].second, nj1 = q[(j + 1) % r].first;
    Mat k = kernel_basis(hstack(m.Y.pow(mj), m.X.pow(nj1)));
    Relation rho{k.rows_range(0, n), k.rows_range(n, 2 * n)};
    c = c ? compose(*c, rho) : rho;
  }
  const Relation& C = *c;
  Mat full = Mat::identity(n), none(n, 0);
  Mat I = iterate_to_limit(full, [&](const Mat& s) { return rel_image(C, s); });
  Mat D = iterate_to_limit(full, [&](const Mat& s) { return rel_preimage(C, s); });
  Mat Z = iterate_to_limit(rel_image(C, none), [&](const Mat& s) { return span_sum(s, rel_image(C, s)); });
  Mat Zm = iterate_to_limit(rel_preimage(C, none), [&](const Mat& s) { return span_sum(s, rel_preimage(C, s)); });
  Mat id = span_intersection(I, D);
  Mat den = span_sum(span_intersection(I, Zm), span_intersection(D, Z));
  // complement of den inside id
  Mat ext = column_basis(hstack(den, id));
  int dd = den.cols();
  int rd = ext.cols() - dd;
  if (regular_dim) *regular_dim = rd;
  if (rd <= 0) return {};
  Mat comp = ext.cols_range(dd, ext.cols());
  Mat T(rd, rd);
  for (int j = 0; j < rd; ++j) {
    // find (u, w) in C with u = comp_j and w in id
    Mat sys = vstack(hstack(C.U, Mat(n, id.cols())), hstack(C.W, Rational(-1) * id));
    Mat rhs = vstack(comp.cols_range(j, j + 1), Mat(n, 1));
    auto sol = solve(sys, rhs);
    if (!sol) return {};
    Mat w = C.W * sol->rows_range(0, C.U.cols());
    auto coords = solve(ext, w);
    if (!coords) return {};
    for (int i = 0; i < rd; ++i) T(i, j) = (*coords)(dd + i, 0);
  }
  return charpoly(T);
}

namespace {

using Count = std::map<std::pair<int, int>, int>;

bool divide_counts(const std::vector<std::pair<std::pair<int, int>, int>>& in, int k, Count& out) {
  out.clear();
  for (auto& [key, c] : in) {
    if (c % k) return false;
    out[key] = c / k;
  }
  return true;
}

int total(const Count& c) {
  int s = 0;
  for (auto& [k, v] : c) s += v;
  return s;
}

void string_paths(Count& peaks, Count& valleys, Pairs& path, int need_x, std::vector<Pairs>& out) {
  if (out.size() >= kMaxCandidates) return;
  for (auto& [pk, cnt] : peaks) {
    if (cnt == 0 || pk.first != need_x) continue;
    --cnt;
    path.push_back(pk);
    int b = pk.second;
    if (b == 0) {
      if (total(peaks) == 0 && total(valleys) == 0) out.push_back(path);
    } else {
      for (auto& [vk, vc] : valleys) {
        if (vc == 0 || vk.second != b) continue;
        --vc;
        if (vk.first == 0) {
          if (total(peaks) == 0 && total(valleys) == 0) out.push_back(path);
        } else {
          string_paths(peaks, valleys, path, vk.first, out);
        }
        ++vc;
      }
    }
    path.pop_back();
    ++cnt;
  }
}

std::vector<Pairs> string_candidates(Count peaks, Count valleys) {
  std::vector<Pairs> out;
  Pairs path;
  // left end: a peak without x-leg, or a sink at the end of an x-leg
  bool start_peak = false;
  for (auto& [pk, c] : peaks) start_peak = start_peak || (c > 0 && pk.first == 0);
  if (start_peak) {
    string_paths(peaks, valleys, path, 0, out);
  } else {
    for (auto& [vk, vc] : valleys) {
      if (vc == 0 || vk.second != 0 || vk.first == 0) continue;
      --vc;
      string_paths(peaks, valleys, path, vk.first, out);
      ++vc;
    }
  }
  return out;
}

void band_cycles(Count& peaks, Count& valleys, Pairs& path, int remaining, std::vector<Pairs>& out) {
  if (out.size() >= kMaxCandidates) return;
  int b = path.back().second;
  if (remaining == 0) {
    auto it = valleys.find({path.front().first, b});
    if (it != valleys.end() && it->second == 1 && total(valleys) == 1) out.push_back(path);
    return;
  }
  for (auto& [vk, vc] : valleys) {
    if (vc == 0 || vk.second != b) continue;
    --vc;
    for (auto& [pk, pc] : peaks) {
      if (pc == 0 || pk.first != vk.first) continue;
      --pc;
      path.push_back(pk);
      band_cycles(peaks, valleys, path, remaining - 1, out);
      path.pop_back();
      ++pc;
    }
    ++vc;
  }
}

std::vector<Pairs> band_candidates(Count peaks, Count valleys) {
  std::vector<Pairs> raw;
  if (peaks.empty()) return raw;
  Pairs path{peaks.begin()->first};
  peaks.begin()->second--;
  band_cycles(peaks, valleys, path, total(peaks), raw);
  std::set<Pairs> seen;
  std::vector<Pairs> out;
  for (auto& q : raw) {
    if (is_periodic(q)) continue;
    if (seen.insert(least_rotation(q)).second) out.push_back(least_rotation(q));
  }
  return out;
}

FiniteLengthModule power_of(const FiniteLengthModule& a, int k) {
  std::vector<FiniteLengthModule> v(k, a);
  return direct_sum(v);
}

bool certify(const FiniteLengthModule& cand, int k, const FiniteLengthModule& w, uint64_t seed) {
  if (cand.dim * k != w.dim) return false;
  return is_isomorphic(power_of(cand, k), w, seed).isomorphic();
}

struct BlockAnswer {
  bool ok = false;
  std::vector<IndecLabel> labels;
  std::string diag;
  std::vector<UPoly> charpolys;
};

BlockAnswer identify_block(const Block& blk, uint64_t seed) {
  BlockAnswer ans;
  const FiniteLengthModule& w = blk.module;
  int k = blk.multiplicity > 0 ? blk.multiplicity : 1;
  if (w.dim == 1) {
    ans.ok = true;
    ans.labels.push_back(IndecLabel::of(StringLabel::make(0, {}, 0)));
    return ans;
  }
  PeakValleyData pv = peaks_and_valleys(w);
  Count peaks, valleys;
  if (!divide_counts(pv.peaks, k, peaks) || !divide_counts(pv.valleys, k, valleys)) {
    ans.diag = "peak/valley counts not divisible by the block multiplicity " + std::to_string(k);
    return ans;
  }
  bool is_string = false;
  for (auto& [pk, c] : peaks) is_string = is_string || pk.first == 0 || pk.second == 0;
  for (auto& [vk, c] : valleys) is_string = is_string || vk.first == 0 || vk.second == 0;

  if (is_string) {
    for (const Pairs& path : string_candidates(peaks, valleys)) {
      StringLabel s;
      try {
        s = StringLabel::from_peaks(path);
      } catch (const std::invalid_argument&) {
        continue;
      }
      if (certify(string_module(s), k, w, seed)) {
        ans.ok = true;
        ans.labels.assign(k, IndecLabel::of(s));
        return ans;
      }
    }
    ans.diag = "no string candidate certified for a block of dimension " + std::to_string(w.dim);
    return ans;
  }

  int g = 0;
  for (auto& [pk, c] : peaks) g = std::gcd(g, c);
  for (auto& [vk, c] : valleys) g = std::gcd(g, c);
  for (int m = g; m >= 1; --m) {
    if (g % m) continue;
    Count pm, vm;
    for (auto& [key, c] : peaks) pm[key] = c / m;
    for (auto& [key, c] : valleys) vm[key] = c / m;
    for (const Pairs& q : band_candidates(pm, vm)) {
      int rd = 0;
      UPoly cp = transfer_charpoly(w, q, &rd);
      if (cp.empty() || rd != m * k) continue;
      Rational c = -cp[rd - 1] / Rational(rd);
      UPoly expect{Rational(1)};
      for (int i = 0; i < rd; ++i) expect = upoly_mul(expect, UPoly{-c, Rational(1)});
      if (expect != cp || c.is_zero()) {
        ans.charpolys.push_back(cp);
        continue;
      }
      for (const Rational& lam : {c.inv(), -c.inv(), c, -c}) {
        BandLabel b = BandLabel::make(q, m, lam);
        if (certify(band_module(b), k, w, seed)) {
          ans.ok = true;
          ans.labels.assign(k, IndecLabel::of(b));
          return ans;
        }
      }
    }
  }
  ans.diag = ans.charpolys.empty()
                 ? "no band candidate certified for a block of dimension " + std::to_string(w.dim)
                 : "band parameter not in the field: transfer map has characteristic polynomial " +
                       upoly_to_string(ans.charpolys.front());
  return ans;
}

}  // namespace

IdentifyResult identify(const FiniteLengthModule& m, uint64_t seed) {
  IdentifyResult res;
  if (m.dim == 0) {
    res.identified = true;
    return res;
  }
  // conjugation is exact, so certifying against the tidied module is enough
  FiniteLengthModule tidy = word_basis(m);
  auto blocks = split_module(tidy, seed);
  std::vector<IndecLabel> labels;
  bool ok = true;
  for (const auto& b : blocks) {
    if (b.multiplicity == 0)
      res.diagnostics.push_back("block of dimension " + std::to_string(b.module.dim) +
                                " has semisimple endomorphism algebra of dimension " +
                                std::to_string(b.semisimple_dim) + ", not a square");
    BlockAnswer a = identify_block(b, seed);
    res.transfer_charpolys.insert(res.transfer_charpolys.end(), a.charpolys.begin(), a.charpolys.end());
    if (!a.ok) {
      ok = false;
      res.diagnostics.push_back(a.diag);
      continue;
    }
    labels.insert(labels.end(), a.labels.begin(), a.labels.end());
  }
  if (!ok) return res;
  std::vector<FiniteLengthModule> mods;
  for (auto& l : labels) mods.push_back(l.module());
  IsoResult cert = is_isomorphic(direct_sum(mods), tidy, seed);
  if (!cert.isomorphic()) {
    res.diagnostics.push_back("final certification failed: " + cert.reason);
    return res;
  }
  res.identified = true;
  res.labels = canonical_multiset(labels);
  return res;
}

}  // namespace nodalfm
