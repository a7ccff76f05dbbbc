#include "nodalfm/module.hpp"

#include <array>
#include <stdexcept>

namespace nodalfm {

FiniteLengthModule::FiniteLengthModule(Mat x, Mat y) : dim(x.rows()), X(std::move(x)), Y(std::move(y)) {
  if (!X.square() || !Y.square() || Y.rows() != dim)
    throw std::invalid_argument("module matrices must be square of equal size");
}

void FiniteLengthModule::validate() const {
  if (!(X * Y).is_zero() || !(Y * X).is_zero()) throw std::invalid_argument("module violates XY = YX = 0");
  if (!X.pow(dim).is_zero()) throw std::invalid_argument("X is not nilpotent");
  if (!Y.pow(dim).is_zero()) throw std::invalid_argument("Y is not nilpotent");
}

FiniteLengthModule zero_module() { return FiniteLengthModule(Mat(0, 0), Mat(0, 0)); }

FiniteLengthModule direct_sum(const FiniteLengthModule& a, const FiniteLengthModule& b) {
  return FiniteLengthModule(block_diag(a.X, b.X), block_diag(a.Y, b.Y));
}

FiniteLengthModule direct_sum(const std::vector<FiniteLengthModule>& ms) {
  FiniteLengthModule s = zero_module();
  for (const auto& m : ms) s = direct_sum(s, m);
  return s;
}

int nilpotency_index(const Mat& a) {
  int n = a.rows();
  Mat p = Mat::identity(n);
  for (int k = 0; k < n; ++k) {
    if (p.is_zero()) return k;
    p = p * a;
  }
  return n;
}

std::vector<int> rank_profile(const FiniteLengthModule& m) {
  int n = m.dim;
  int ix = nilpotency_index(m.X), iy = nilpotency_index(m.Y);
  std::vector<Mat> xp{Mat::identity(n)}, yp{Mat::identity(n)};
  for (int k = 1; k <= ix; ++k) xp.push_back(xp.back() * m.X);
  for (int k = 1; k <= iy; ++k) yp.push_back(yp.back() * m.Y);
  std::vector<int> rx, ry;
  std::vector<Mat> kx, ky;
  for (auto& p : xp) rx.push_back(rank(p)), kx.push_back(kernel_basis(p));
  for (auto& p : yp) ry.push_back(rank(p)), ky.push_back(kernel_basis(p));

  std::vector<std::vector<std::array<int, 8>>> tab(ix + 1, std::vector<std::array<int, 8>>(iy + 1));
  for (int a = 0; a <= ix; ++a)
    for (int b = 0; b <= iy; ++b) {
      const Mat &A = xp[a], &B = yp[b];
      auto& t = tab[a][b];
      t[0] = rx[a];
      t[1] = ry[b];
      t[2] = n - rank(vstack(A, B));
      t[3] = rank(hstack(A, B));
      t[4] = rank(A * ky[b]);
      t[5] = rank(B * kx[a]);
      t[6] = rx[a] - rank(B * A);
      t[7] = ry[b] - rank(A * B);
    }
  std::vector<int> out;
  out.reserve(8 * static_cast<std::size_t>(n + 1) * (n + 1));
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b) {
      const auto& t = tab[std::min(a, ix)][std::min(b, iy)];
      out.insert(out.end(), t.begin(), t.end());
    }
  return out;
}

std::vector<Mat> hom_space(const FiniteLengthModule& a, const FiniteLengthModule& b) {
  return intertwiner_space(a.X, a.Y, b.X, b.Y);
}

std::vector<Mat> end_space(const FiniteLengthModule& a) { return hom_space(a, a); }

namespace {

// Sound non-isomorphism certificate: if a ≅ b then id_a is a sum of
// composites g∘f with f: a→b, g: b→a.
bool identity_in_composites(const std::vector<Mat>& fs, const std::vector<Mat>& gs, int n) {
  if (n == 0) return true;
  std::vector<SparseVec<Rational>> rows;
  SparseEchelon<Rational> ech(n * n);
  for (const auto& g : gs)
    for (const auto& f : fs) {
      Mat c = g * f;
      std::vector<std::pair<int, Rational>> e;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (!c(i, j).is_zero()) e.emplace_back(i * n + j, c(i, j));
      ech.add(make_sparse(std::move(e)));
    }
  std::vector<std::pair<int, Rational>> id;
  for (int i = 0; i < n; ++i) id.emplace_back(i * n + i, Rational(1));
  return ech.reduce(make_sparse(std::move(id))).empty();
}

}  // namespace

IsoResult is_isomorphic(const FiniteLengthModule& a, const FiniteLengthModule& b, uint64_t seed,
                        const RandomConfig& cfg) {
  IsoResult r;
  if (a.dim != b.dim) {
    r.outcome = IsoOutcome::NotIsomorphic;
    r.reason = "dimensions differ";
    return r;
  }
  if (a.dim == 0) {
    r.outcome = IsoOutcome::Isomorphic;
    r.reason = "both zero";
    return r;
  }
  if (rank_profile(a) != rank_profile(b)) {
    r.outcome = IsoOutcome::NotIsomorphic;
    r.reason = "rank profiles differ";
    return r;
  }
  auto hab = hom_space(a, b);
  auto hba = hom_space(b, a);
  r.hom_ab = static_cast<int>(hab.size());
  r.hom_ba = static_cast<int>(hba.size());
  if (hab.size() != hba.size()) {
    r.outcome = IsoOutcome::NotIsomorphic;
    r.reason = "Hom dimensions differ";
    return r;
  }
  if (random_invertible_element(hab, seed, cfg)) {
    r.outcome = IsoOutcome::Isomorphic;
    r.reason = "invertible intertwiner found";
    return r;
  }
  if (!identity_in_composites(hab, hba, a.dim) || !identity_in_composites(hba, hab, b.dim)) {
    r.outcome = IsoOutcome::NotIsomorphic;
    r.reason = "identity is not a sum of composites through the other module";
    return r;
  }
  r.outcome = IsoOutcome::Undecided;
  r.reason = "no invertible intertwiner found after " + std::to_string(cfg.retries) +
             " samples; Hom dims " + std::to_string(r.hom_ab) + "/" + std::to_string(r.hom_ba);
  return r;
}

FiniteLengthModule matlis_dual(const FiniteLengthModule& m) {
  return FiniteLengthModule(m.X.transpose(), m.Y.transpose());
}

FiniteLengthModule involution_pullback(const FiniteLengthModule& m) { return FiniteLengthModule(m.Y, m.X); }

FiniteLengthModule twisted_matlis(const FiniteLengthModule& m) { return involution_pullback(matlis_dual(m)); }

FiniteLengthModule conjugate(const FiniteLengthModule& m, const Mat& p) {
  auto pi = inverse(p);
  if (!pi) throw std::invalid_argument("conjugate: singular change of basis");
  return FiniteLengthModule(*pi * m.X * p, *pi * m.Y * p);
}

FiniteLengthModule restrict_to(const FiniteLengthModule& m, const Mat& b) {
  auto sx = solve(b, m.X * b);
  auto sy = solve(b, m.Y * b);
  if (!sx || !sy) throw std::invalid_argument("restrict_to: subspace is not invariant");
  return FiniteLengthModule(*sx, *sy);
}

}  // namespace nodalfm
