#include <algorithm>
#include <random>

#include "doctest.h"
#include "nodalfm/identify.hpp"
#include "oracles.hpp"

using namespace nodalfm;

namespace {

FiniteLengthModule scramble(const FiniteLengthModule& m, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> d(-2, 2);
  while (true) {
    Mat p(m.dim, m.dim);
    for (int i = 0; i < m.dim; ++i)
      for (int j = 0; j < m.dim; ++j) p(i, j) = Rational(d(rng));
    if (rank(p) == m.dim) return conjugate(m, p);
  }
}

std::vector<IndecLabel> labels_of(std::initializer_list<IndecLabel> ls) { return canonical_multiset(ls); }

}  // namespace

TEST_CASE("polynomial helpers") {
  UPoly p{Rational(-6), Rational(11), Rational(-6), Rational(1)};  // (t-1)(t-2)(t-3)
  auto r = upoly_rational_roots(p);
  CHECK(r.size() == 3);
  for (auto& c : r) CHECK(upoly_eval(p, c).is_zero());
  CHECK(upoly_rational_roots(UPoly{Rational(-2), Rational(0), Rational(1)}).empty());
  UPoly sq = upoly_mul(UPoly{Rational(1, 3), Rational(1)}, UPoly{Rational(1, 3), Rational(1)});
  CHECK(upoly_squarefree_part(sq) == UPoly{Rational(1, 3), Rational(1)});
  CHECK(upoly_rational_roots(sq) == std::vector<Rational>{Rational(-1, 3)});

  // roots whose numerator and denominator are far beyond double precision
  Rational big = Rational::parse("819335856100384123457/1300623973353371987651");
  UPoly h = upoly_mul(upoly_mul(UPoly{-big, Rational(1)}, UPoly{Rational(-3, 7), Rational(1)}),
                      UPoly{Rational(1), Rational(0), Rational(1)});
  auto hr = upoly_rational_roots(h);
  std::sort(hr.begin(), hr.end(), [](const Rational& a, const Rational& b) { return a < b; });
  CHECK(hr == std::vector<Rational>{Rational(3, 7), big});
}

TEST_CASE("peaks and valleys of a string read off the diagram") {
  auto s = StringLabel::make(2, {{3, 2}}, 1);
  auto pv = peaks_and_valleys(oracle::string_from_diagram(s));
  std::vector<std::pair<std::pair<int, int>, int>> peaks{{{0, 2}, 1}, {{1, 0}, 1}, {{3, 2}, 1}};
  CHECK(pv.peaks == peaks);
}

TEST_CASE("identify single indecomposables") {
  auto b = BandLabel::make({{1, 2}}, 1, 5);
  auto r = identify(scramble(band_module(b), 1));
  REQUIRE(r.identified);
  CHECK(r.labels == labels_of({IndecLabel::of(b)}));

  auto b2 = BandLabel::make({{2, 1}, {1, 3}}, 2, Rational(-1, 3));
  r = identify(scramble(oracle::band_from_diagram(b2), 2));
  REQUIRE(r.identified);
  CHECK(r.labels == labels_of({IndecLabel::of(b2)}));

  auto s = StringLabel::make(2, {{3, 2}}, 1);
  r = identify(scramble(string_module(s), 3));
  REQUIRE(r.identified);
  CHECK(r.labels == labels_of({IndecLabel::of(s)}));
}

TEST_CASE("identify direct sums") {
  auto ks = IndecLabel::of(StringLabel::make(0, {}, 0));
  auto b = IndecLabel::of(BandLabel::make({{1, 1}}, 1, 1));
  auto r = identify(direct_sum(ks.module(), b.module()));
  REQUIRE(r.identified);
  CHECK(r.labels == labels_of({ks, b}));

  // repeated summands and same-word bands with different parameters
  auto b3 = IndecLabel::of(BandLabel::make({{1, 1}}, 1, 3));
  auto sq = direct_sum(std::vector<FiniteLengthModule>{b.module(), b.module(), b3.module(), ks.module(), ks.module()});
  r = identify(scramble(sq, 4));
  REQUIRE(r.identified);
  CHECK(r.labels == labels_of({b, b, b3, ks, ks}));
}

TEST_CASE("identify random sums from a small catalogue") {
  std::vector<IndecLabel> cat{
      IndecLabel::of(StringLabel::make(0, {}, 0)),
      IndecLabel::of(StringLabel::make(1, {}, 2)),
      IndecLabel::of(StringLabel::make(0, {{2, 1}}, 0)),
      IndecLabel::of(StringLabel::make(1, {{1, 2}}, 0)),
      IndecLabel::of(BandLabel::make({{1, 1}}, 1, 2)),
      IndecLabel::of(BandLabel::make({{1, 1}}, 2, -1)),
      IndecLabel::of(BandLabel::make({{1, 2}, {1, 1}}, 1, Rational(1, 3))),
  };
  std::mt19937_64 rng(7);
  for (int t = 0; t < 12; ++t) {
    int cnt = 1 + static_cast<int>(rng() % 3);
    std::vector<IndecLabel> pick;
    std::vector<FiniteLengthModule> mods;
    for (int i = 0; i < cnt; ++i) {
      pick.push_back(cat[rng() % cat.size()]);
      mods.push_back(pick.back().module());
    }
    auto r = identify(scramble(direct_sum(mods), t), t);
    REQUIRE(r.identified);
    CHECK(r.labels == canonical_multiset(pick));
  }
}

TEST_CASE("band parameter outside the field is reported") {
  // coker(x I + y C) with C the companion matrix of t^2 - 2
  PolyPresentation p;
  p.target = {PieceKind::FullR, PieceKind::FullR};
  p.rel = {{Poly::x(1), Poly::y(1, Rational(2))}, {Poly::y(1), Poly::x(1)}};
  auto m = cokernel_stable(p);
  CHECK(m.dim == 4);
  auto r = identify(m);
  CHECK(!r.identified);
  REQUIRE(!r.transfer_charpolys.empty());
  auto cp = r.transfer_charpolys.front();
  CHECK(cp.size() == 3);
  CHECK(upoly_rational_roots(cp).empty());
  CHECK(!r.diagnostics.empty());
}
