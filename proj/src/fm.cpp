#include "nodalfm/fm.hpp"

#include <numeric>

namespace nodalfm {

namespace {

Shape require_ss(const SheafDesc& e) {
  Shape s = ss_deg0_shape(e);
  if (s.kind == Shape::Kind::NotSS) throw NotSemistable(to_string(e) + " is not semistable of degree 0: " + s.reason);
  return s;
}

bool odd(long long v) { return v % 2 != 0; }

}  // namespace

TorsionDesc fm_forward(const SheafDesc& e) {
  Shape s = require_ss(e);
  switch (s.kind) {
    case Shape::Kind::Atiyah: {
      const auto& b = std::get<BandSheafDesc>(e);
      return TorsionDesc::smooth_point(b.lambda, b.m);
    }
    case Shape::Kind::Band: {
      const auto& b = std::get<BandSheafDesc>(e);
      int N = static_cast<int>(s.runs.size());
      Rational lam = odd(b.n() + N) ? -b.lambda : b.lambda;
      return TorsionDesc::of(BandLabel::make(s.runs, b.m, lam));
    }
    default: {
      const Pairs& r = s.runs;
      int N = static_cast<int>(r.size());
      Pairs peaks;
      if (N == 1) {
        peaks.push_back(r[0]);
      } else {
        peaks.push_back({r[0].first, r[0].second + 1});
        for (int i = 1; i + 1 < N; ++i) peaks.push_back({r[i].first + 1, r[i].second + 1});
        peaks.push_back({r[N - 1].first + 1, r[N - 1].second});
      }
      return TorsionDesc::of(StringLabel::from_peaks(peaks));
    }
  }
}

SheafDesc fm_inverse(const TorsionDesc& t) {
  switch (t.kind) {
    case TorsionDesc::Kind::SmoothPoint: return BandSheafDesc::make({0}, t.len, t.lambda);
    case TorsionDesc::Kind::SingularBand: {
      const BandLabel& b = t.band;
      std::vector<int> d;
      for (auto [ni, mi] : b.q) {
        d.push_back(1);
        d.insert(d.end(), ni - 1, 0);
        d.push_back(-1);
        d.insert(d.end(), mi - 1, 0);
      }
      int N = static_cast<int>(b.q.size()), n = static_cast<int>(d.size());
      Rational lam = odd(n + N) ? -b.lambda : b.lambda;
      return BandSheafDesc::make(std::move(d), b.m, lam);
    }
    default: {
      Pairs p = t.str.peaks();
      int N = static_cast<int>(p.size());
      Pairs r(N);
      if (N == 1) {
        r[0] = p[0];
      } else {
        r[0] = {p[0].first, p[0].second - 1};
        for (int i = 1; i + 1 < N; ++i) r[i] = {p[i].first - 1, p[i].second - 1};
        r[N - 1] = {p[N - 1].first - 1, p[N - 1].second};
      }
      std::vector<int> d;
      for (int i = 0; i < N; ++i) {
        if (i) d.push_back(1);
        d.insert(d.end(), r[i].first, 0);
        d.push_back(-1);
        d.insert(d.end(), r[i].second, 0);
      }
      return StringSheafDesc::make(std::move(d));
    }
  }
}

FiniteLengthModule module_of(const TorsionDesc& t) { return t.label().module(); }

// ---- charges ----

std::vector<TwistLetter> parse_twist_word(const std::string& w) {
  std::vector<TwistLetter> out;
  std::size_t i = 0;
  while (i < w.size()) {
    char c = w[i];
    if (c == ' ') {
      ++i;
      continue;
    }
    if (c != 'A' && c != 'B' && c != 'T')
      throw std::invalid_argument("unexpected character '" + std::string(1, c) + "' at byte " + std::to_string(i));
    TwistLetter l{c, 1};
    ++i;
    if (i < w.size() && w[i] == '^') {
      if (w.compare(i, 3, "^-1") != 0) throw std::invalid_argument("expected ^-1 at byte " + std::to_string(i));
      l.exp = -1;
      i += 3;
    }
    out.push_back(l);
  }
  return out;
}

namespace {

IMat2 mul(const IMat2& a, const IMat2& b) {
  IMat2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}

IMat2 letter(TwistLetter l) {
  IMat2 m;
  switch (l.gen) {
    case 'A': m = {{{1, -1}, {0, 1}}}; break;
    case 'B': m = {{{1, 0}, {1, 1}}}; break;
    default: m = {{{-1, 0}, {0, -1}}}; break;
  }
  if (l.exp < 0) {  // det 1
    IMat2 inv{{{m[1][1], -m[0][1]}, {-m[1][0], m[0][0]}}};
    return inv;
  }
  return m;
}

constexpr IMat2 kId{{{1, 0}, {0, 1}}};

IMat2 pow(IMat2 a, int e) {
  IMat2 r = kId;
  for (int i = 0; i < e; ++i) r = mul(r, a);
  return r;
}

}  // namespace

IMat2 sl2_matrix(const std::vector<TwistLetter>& w) {
  IMat2 r = kId;
  for (auto l : w) r = mul(r, letter(l));
  return r;
}

IMat2 sl2_matrix(const std::string& w) { return sl2_matrix(parse_twist_word(w)); }

std::string to_string(const IMat2& m) {
  return "[[" + std::to_string(m[0][0]) + "," + std::to_string(m[0][1]) + "],[" + std::to_string(m[1][0]) + "," +
         std::to_string(m[1][1]) + "]]";
}

std::vector<RelationResult> check_relations() {
  IMat2 a = sl2_matrix("A"), b = sl2_matrix("B");
  IMat2 bab = sl2_matrix("BAB");
  IMat2 minus{{{-1, 0}, {0, -1}}};
  return {
      {"ABA = BAB", sl2_matrix("ABA") == bab},
      {"(AB)^6 = I", pow(mul(a, b), 6) == kId},
      {"(BAB)^2 = -I", pow(bab, 2) == minus},
      {"(BAB)^4 = I", pow(bab, 4) == kId},
      {"BAB = [[0,-1],[1,0]]", bab == IMat2{{{0, -1}, {1, 0}}}},
  };
}

// ---- sections, gluing, cohomology ----

namespace {

// Coordinates (ν, a, j) of ⊕_ν H^0(O(d_ν))^m.
struct Coords {
  std::vector<int> d;
  int m;
  std::vector<int> off;
  int total = 0;

  Coords(const std::vector<int>& deg, int mm) : d(deg), m(mm) {
    for (int v : d) {
      off.push_back(total);
      if (v >= 0) total += (v + 1) * m;
    }
  }
  bool has(int nu) const { return d[nu] >= 0; }
  int at(int nu, int a, int j) const { return off[nu] + a * m + j; }
};

void validate(const GlueSpec& g) {
  if (g.d.empty()) throw std::invalid_argument("glue spec needs n >= 1");
  if (!g.glue.square() || g.glue.rows() < 1) throw std::invalid_argument("glue matrix must be square of size >= 1");
}

// Rows: the gluing conditions f_ν(0:1) = f_{ν+1}(1:0), and at s_n (cycle)
// f_n(0:1) = G f_1(1:0).
Mat gluing_map(const GlueSpec& g, const Coords& c) {
  int n = g.n(), m = g.m();
  int nodes = g.topology == Topology::Cycle ? n : n - 1;
  Mat a(nodes * m, c.total);
  for (int nu = 0; nu < nodes; ++nu) {
    int nx = (nu + 1) % n;
    for (int j = 0; j < m; ++j) {
      int row = nu * m + j;
      if (c.has(nu)) a(row, c.at(nu, 0, j)) += Rational(1);
      if (!c.has(nx)) continue;
      if (nu == n - 1) {
        for (int k = 0; k < m; ++k) a(row, c.at(nx, c.d[nx], k)) -= g.glue(j, k);
      } else {
        a(row, c.at(nx, c.d[nx], j)) -= Rational(1);
      }
    }
  }
  return a;
}

}  // namespace

Mat h0_basis(const GlueSpec& g) {
  validate(g);
  Coords c(g.d, g.m());
  if (c.total == 0) return Mat(0, 0);
  return kernel_basis(gluing_map(g, c));
}

Cohomology cohomology(const GlueSpec& g) {
  validate(g);
  // normalisation sequence: 0 -> L -> ⊕ O(d_ν)^m -> ⊕_nodes k^m -> 0
  Coords c(g.d, g.m());
  Mat a = gluing_map(g, c);
  long long rk = c.total ? rank(a) : 0;
  long long h1 = a.rows() - rk;
  for (int v : g.d)
    if (v < -1) h1 += 1LL * g.m() * (-v - 1);  // h^1(O(v)) on a line
  return {c.total - rk, h1};
}

long long euler_characteristic(const GlueSpec& g) {
  long long s = std::accumulate(g.d.begin(), g.d.end(), 0LL);
  return g.topology == Topology::Cycle ? g.m() * s : g.m() * (s + 1);
}

GlueSpec glue_spec_of_twist(const SheafDesc& e) {
  GlueSpec g;
  if (auto b = std::get_if<BandSheafDesc>(&e)) {
    g.d = b->d;
    g.glue = jordan_block(b->m, b->lambda);
    g.topology = Topology::Cycle;
  } else {
    g.d = std::get<StringSheafDesc>(e).d;
    g.topology = Topology::Chain;
  }
  for (int& v : g.d) ++v;
  return g;
}

// ---- evaluation presentation ----

namespace {

Poly mono(char var, int k, const Rational& c) { return var == 'x' ? Poly::x(k, c) : Poly::y(k, c); }

// Image of a section (coordinate column) at the node, one Poly per row.
std::vector<Poly> localize(const GlueSpec& g, const Coords& c, const Mat& s) {
  int n = g.n(), m = g.m();
  auto coef = [&](int nu, int a, int j) { return s(c.at(nu, a, j), 0); };
  // f_ν(x,1), f_ν(1,y), f_ν(0,1) in component j
  auto fx = [&](int nu, int j) {
    Poly p;
    if (c.has(nu))
      for (int a = 0; a <= c.d[nu]; ++a) p = p + mono('x', a, coef(nu, a, j));
    return p;
  };
  auto fy_vec = [&](int nu, const Mat* G, int j) {
    Poly p;
    if (!c.has(nu)) return p;
    for (int a = 0; a <= c.d[nu]; ++a) {
      Rational v(0);
      if (G)
        for (int k = 0; k < m; ++k) v += (*G)(j, k) * coef(nu, a, k);
      else
        v = coef(nu, a, j);
      p = p + mono('y', c.d[nu] - a, v);
    }
    return p;
  };
  auto f0 = [&](int nu, int j) { return c.has(nu) ? coef(nu, 0, j) : Rational(0); };
  std::vector<Poly> out;
  if (g.topology == Topology::Cycle) {
    for (int nu = 0; nu < n; ++nu)
      for (int j = 0; j < m; ++j)
        out.push_back(fx(nu, j) + fy_vec((nu + 1) % n, nu == n - 1 ? &g.glue : nullptr, j) - Poly(f0(nu, j)));
  } else {
    for (int j = 0; j < m; ++j) out.push_back(fy_vec(0, nullptr, j));
    for (int nu = 0; nu + 1 < n; ++nu)
      for (int j = 0; j < m; ++j) out.push_back(fx(nu, j) + fy_vec(nu + 1, nullptr, j) - Poly(f0(nu, j)));
    for (int j = 0; j < m; ++j) out.push_back(fx(n - 1, j));
  }
  return out;
}

std::vector<PieceKind> target_of(const GlueSpec& g) {
  int n = g.n(), m = g.m();
  if (g.topology == Topology::Cycle) return std::vector<PieceKind>(n * m, PieceKind::FullR);
  std::vector<PieceKind> t(m, PieceKind::YOnly);
  t.insert(t.end(), (n - 1) * m, PieceKind::FullR);
  t.insert(t.end(), m, PieceKind::XOnly);
  return t;
}

PolyPresentation from_sections(const GlueSpec& g, const Coords& c, const Mat& sections) {
  PolyPresentation pp;
  pp.target = target_of(g);
  pp.rel.assign(pp.target.size(), std::vector<Poly>(sections.cols()));
  for (int col = 0; col < sections.cols(); ++col) {
    auto img = localize(g, c, sections.cols_range(col, col + 1));
    for (std::size_t r = 0; r < img.size(); ++r) pp.rel[r][col] = img[r];
  }
  return pp;
}

// One term of a tabulated section: line ν (0-based) carries the monomial
// z0^a z1^(e_ν - a), times e_j, or times J^{-1} e_j when `jinv`.
struct Term {
  int line, a;
  bool jinv = false;
};
using TableVec = std::vector<Term>;

std::vector<TableVec> band_table(const std::vector<int>& d) {
  int n = static_cast<int>(d.size());
  auto e = [&](int i) { return d[i] + 1; };
  std::vector<TableVec> out;
  if (n == 2) {  // d = (1,-1)
    out.push_back({{0, 1}});
    out.push_back({{0, 2, true}, {0, 0}, {1, 0}});
    return out;
  }
  for (int v = 0; v < n; ++v)
    if (d[v] == 1) out.push_back({{v, 1}});  // x_ν y_ν
  for (int v = 0; v < n; ++v) {
    if (d[v] != -1) continue;
    if (v == n - 1)
      out.push_back({{v - 1, 0}, {v, 0}, {0, 2, true}});
    else  // v != 0 since d_1 = 1
      out.push_back({{v - 1, 0}, {v, 0}, {v + 1, e(v + 1)}});
  }
  for (int v = 0; v < n; ++v) {
    if (d[v] == -1 || d[(v + 1) % n] == -1) continue;
    if (v == n - 1)
      out.push_back({{v, 0}, {0, 2, true}});
    else
      out.push_back({{v, 0}, {v + 1, e(v + 1)}});
  }
  return out;
}

std::vector<TableVec> string_table(const std::vector<int>& d) {
  int n = static_cast<int>(d.size());
  auto e = [&](int i) { return d[i] + 1; };
  std::vector<TableVec> out;
  for (int v = 0; v < n; ++v)
    if (d[v] == 1) out.push_back({{v, 1}});
  for (int v = 0; v < n; ++v) {
    if (d[v] != -1) continue;
    TableVec t;
    if (v > 0) t.push_back({v - 1, 0});
    t.push_back({v, 0});
    if (v < n - 1) t.push_back({v + 1, e(v + 1)});
    out.push_back(t);
  }
  for (int v = 0; v < n; ++v) {
    if (d[v] == -1) continue;
    if (v < n - 1 && d[v + 1] != -1) out.push_back({{v, 0}, {v + 1, e(v + 1)}});
    if (v == n - 1) out.push_back({{v, 0}});
  }
  if (d[0] == 0) out.push_back({{0, 1}});  // x_1
  return out;
}

Mat table_sections(const GlueSpec& g, const Coords& c, const std::vector<TableVec>& table) {
  int m = g.m();
  auto jinv = inverse(g.glue);
  if (!jinv) throw std::invalid_argument("gluing matrix is singular");
  Mat s(c.total, static_cast<int>(table.size()) * m);
  int col = 0;
  for (const auto& t : table)
    for (int j = 0; j < m; ++j, ++col)
      for (const Term& term : t) {
        if (!c.has(term.line) || term.a > c.d[term.line]) throw std::logic_error("section table out of range");
        for (int k = 0; k < m; ++k) {
          Rational v = term.jinv ? (*jinv)(k, j) : Rational(k == j ? 1 : 0);
          s(c.at(term.line, term.a, k), col) += v;
        }
      }
  return s;
}

}  // namespace

PolyPresentation build_eval_presentation_generic(const SheafDesc& e) {
  Shape s = require_ss(e);
  if (s.kind == Shape::Kind::Atiyah)
    throw std::invalid_argument("Atiyah bundle: the image is supported at a smooth point");
  GlueSpec g = glue_spec_of_twist(e);
  Coords c(g.d, g.m());
  return from_sections(g, c, h0_basis(g));
}

PolyPresentation build_eval_presentation(const SheafDesc& e) {
  Shape s = require_ss(e);
  if (s.kind == Shape::Kind::Atiyah)
    throw std::invalid_argument("Atiyah bundle: the image is supported at a smooth point");
  GlueSpec g = glue_spec_of_twist(e);
  Coords c(g.d, g.m());
  const auto& d = std::visit([](const auto& x) -> const std::vector<int>& { return x.d; }, e);
  bool band = s.kind == Shape::Kind::Band;
  if (band && d[0] != 1) return from_sections(g, c, h0_basis(g));
  Mat sec = table_sections(g, c, band ? band_table(d) : string_table(d));
  // the tabulated sections must be a basis of H^0(E(p0))
  long long rk = charge_of(e).rank;
  if (sec.cols() != rk || rank(sec) != rk || !(gluing_map(g, c) * sec).is_zero())
    throw std::logic_error("section table does not give a basis of H^0 for " + to_string(e));
  return from_sections(g, c, sec);
}

// ---- verification ----

VerifyReport verify_fm(const SheafDesc& e, uint64_t seed, std::optional<int> trunc) {
  VerifyReport r;
  r.desc = to_string(e);
  r.rank = charge_of(e).rank;
  Shape s = ss_deg0_shape(e);
  if (s.kind == Shape::Kind::NotSS) {
    r.diagnostics.push_back("not semistable of degree 0: " + s.reason);
    return r;
  }
  TorsionDesc t = fm_forward(e);
  r.expected = to_string(t.canonical());
  if (s.kind == Shape::Kind::Atiyah) {
    r.diagnostics.push_back("image is supported at a smooth point; no evaluation oracle at the node");
    return r;
  }
  PolyPresentation pp = build_eval_presentation(e);
  FiniteLengthModule mod;
  if (trunc) {
    Presentation p = pp.at_order(*trunc);
    if (p.lossy) {
      r.diagnostics.push_back("truncation order " + std::to_string(*trunc) + " drops relation terms");
      return r;
    }
    mod = cokernel(p);
    r.order = *trunc;
  } else {
    mod = cokernel_stable(pp, &r.order);
  }
  r.length = mod.dim;
  IdentifyResult id = identify(mod, seed);
  for (auto& l : id.labels) r.identified.push_back(l.to_string());
  r.diagnostics.insert(r.diagnostics.end(), id.diagnostics.begin(), id.diagnostics.end());
  if (!id.identified) return r;
  bool match = id.labels == canonical_multiset({t.label()});
  if (!match) r.diagnostics.push_back("identified module differs from " + r.expected);
  if (r.length != r.rank)
    r.diagnostics.push_back("length " + std::to_string(r.length) + " != rank " + std::to_string(r.rank));
  r.pass = match && r.length == r.rank;
  return r;
}

DualCheckReport fm_dual_check(const SheafDesc& e, uint64_t seed) {
  DualCheckReport r;
  r.desc = to_string(e);
  SheafDesc dual = dual_desc(e);
  r.dual = to_string(dual);
  TorsionDesc img = fm_forward(e), dimg = fm_forward(dual);
  r.image = to_string(img.canonical());
  r.dual_image = to_string(dimg.canonical());
  if (!img.is_singular()) {
    bool ok = !dimg.is_singular() && dimg.lambda == img.lambda.inv() && dimg.len == img.len;
    r.label_side = r.eval_side = ok;
    if (!ok) r.diagnostics.push_back("smooth-point parameter does not invert");
    r.pass = ok;
    return r;
  }
  auto check = [&](const FiniteLengthModule& a, const FiniteLengthModule& b, const char* what) {
    IsoResult iso = is_isomorphic(a, b, seed);
    if (iso.outcome != IsoOutcome::Isomorphic)
      r.diagnostics.push_back(std::string(what) + ": " +
                              (iso.outcome == IsoOutcome::Undecided ? "undecided: " : "not isomorphic: ") + iso.reason);
    return iso.outcome == IsoOutcome::Isomorphic;
  };
  r.label_side = check(module_of(dimg), twisted_matlis(module_of(img)), "labels");
  r.eval_side = check(cokernel_stable(build_eval_presentation(dual)),
                      twisted_matlis(cokernel_stable(build_eval_presentation(e))), "evaluation cokernels");
  r.pass = r.label_side && r.eval_side;
  return r;
}

}  // namespace nodalfm
