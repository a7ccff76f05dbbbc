// Acceptance run: one line per criterion. All checks are exact; the only
// pinned numbers are the sample sizes and seeds below.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <regex>

#include "nodalfm/catalog.hpp"
#include "nodalfm/cli_io.hpp"
#include "nodalfm/fm.hpp"
#include "oracles.hpp"

using namespace nodalfm;

namespace {

constexpr int kMaxN = 8;
constexpr int kGlueSamples = 100;
constexpr int kNonnegSamples = 50;
constexpr int kSums = 200;
constexpr int kMaxSumDim = 24;
constexpr int kTruncSamples = 50;
constexpr uint64_t kSeed = 20240601;

const std::vector<int> kRanks{1, 2, 3};
const std::vector<Rational> kLambdas{Rational(2), Rational(-1), Rational(1, 3)};

struct Tally {
  long long checked = 0, failed = 0;
  std::vector<std::string> notes;
  void check(bool ok, const std::string& what) {
    ++checked;
    if (!ok) {
      ++failed;
      if (notes.size() < 5) notes.push_back(what);
    }
  }
};

// Band label read straight off d: n_i = steps from a 1 to the next -1,
// m_i = steps from that -1 to the next 1, cyclically from the first 1.
std::string band_oracle(const std::vector<int>& d, int m, const Rational& l) {
  int n = static_cast<int>(d.size()), s = 0;
  while (d[s] != 1) ++s;
  Pairs q;
  int last = 0;
  for (int k = 1; k <= n; ++k) {
    int v = d[(s + k) % n];
    if (v == -1) q.push_back({k - last, 0}), last = k;
    if (v == 1) q.back().second = k - last, last = k;
  }
  int N = static_cast<int>(q.size());
  Rational lam = (n + N) % 2 ? -l : l;
  return BandLabel::make(q, m, lam).canonical().to_string();
}

// String label: each -1 is a peak; its x-leg reaches back to the previous 1
// and its y-leg forward to the next 1, counting the shared valley once.
std::string string_oracle(const std::vector<int>& d) {
  std::vector<int> neg;
  for (int i = 0; i < static_cast<int>(d.size()); ++i)
    if (d[i] == -1) neg.push_back(i);
  Pairs peaks;
  for (std::size_t k = 0; k < neg.size(); ++k) {
    int i = neg[k];
    int left = i, right = i;
    while (left > 0 && d[left - 1] != 1) --left;
    while (right + 1 < static_cast<int>(d.size()) && d[right + 1] != 1) ++right;
    // zeros on each side, plus one where the leg ends at a valley shared with a neighbour
    int x = i - left + (left > 0 ? 1 : 0);
    int y = right - i + (right + 1 < static_cast<int>(d.size()) ? 1 : 0);
    peaks.push_back({x, y});
  }
  return StringLabel::from_peaks(peaks).to_string();
}

FiniteLengthModule oracle_module(const TorsionDesc& t) {
  return t.kind == TorsionDesc::Kind::SingularBand ? oracle::band_from_diagram(t.band)
                                                   : oracle::string_from_diagram(t.str);
}

int report(int id, const char* name, const Tally& t, double secs, const std::string& extra = "") {
  bool ok = t.failed == 0 && t.checked > 0;
  std::printf("criterion %d %-34s %s  (%lld checks, %lld failed, %.1fs)%s\n", id, name, ok ? "PASS" : "FAIL",
              t.checked, t.failed, secs, extra.c_str());
  for (auto& n : t.notes) std::printf("    %s\n", n.c_str());
  std::fflush(stdout);
  return ok ? 0 : 1;
}

double timed(const std::function<void()>& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<SheafDesc> band_catalog() {
  std::vector<SheafDesc> out;
  for (auto& d : band_shapes(kMaxN))
    for (int m : kRanks)
      for (auto& l : kLambdas) out.push_back(BandSheafDesc::make(d, m, l));
  return out;
}

std::vector<SheafDesc> string_catalog() {
  std::vector<SheafDesc> out;
  for (auto& d : string_shapes(kMaxN)) out.push_back(StringSheafDesc::make(d));
  return out;
}

IMat2 mul(const IMat2& a, const IMat2& b) {
  IMat2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}

}  // namespace

int main() {
  int failures = 0;
  auto bands = band_catalog();
  auto strings = string_catalog();
  std::vector<VerifyReport> band_reports, string_reports;

  {
    Tally t;
    double s = timed([&] {
      for (auto& e : bands) {
        const auto& b = std::get<BandSheafDesc>(e);
        VerifyReport r = verify_fm(e, kSeed);
        std::string want = band_oracle(b.d, b.m, b.lambda);
        t.check(r.pass && r.identified == std::vector<std::string>{want},
                to_string(e) + " -> " + (r.identified.empty() ? "?" : r.identified[0]) + ", want " + want);
        band_reports.push_back(std::move(r));
      }
    });
    failures += report(1, "band dictionary vs eval cokernel", t, s);
  }

  {
    Tally t;
    double s = timed([&] {
      for (auto& e : strings) {
        VerifyReport r = verify_fm(e, kSeed);
        std::string want = string_oracle(std::get<StringSheafDesc>(e).d);
        t.check(r.pass && r.identified == std::vector<std::string>{want},
                to_string(e) + " -> " + (r.identified.empty() ? "?" : r.identified[0]) + ", want " + want);
        string_reports.push_back(std::move(r));
      }
      SheafDesc s1 = StringSheafDesc::make({-1});
      t.check(to_string(fm_forward(s1)) == "Nq[0()0]", "S(-1) does not map to Nq[0()0]");
      VerifyReport r = verify_fm(s1, kSeed);
      t.check(r.pass && r.identified == std::vector<std::string>{"Nq[0()0]"}, "verify S(-1)");
    });
    failures += report(2, "string dictionary vs eval cokernel", t, s);
  }

  {
    Tally t;
    double s = timed([&] {
      auto expect = [&](const SheafDesc& e, const std::string& want) {
        VerifyReport r = verify_fm(e, kSeed);
        std::string canon = parse_torsion(want).canonical().label().to_string();
        t.check(r.pass && r.identified == std::vector<std::string>{canon}, to_string(e) + " vs " + want);
      };
      expect(StringSheafDesc::make({-1, 0, 1, 0, 0, -1, 0, 1, -1}), "Nq[2(3,2)1]");
      expect(StringSheafDesc::make({0, -1, 0, 1, 0, 0, -1, 0, 0}), "Nq[0(1,2)(3,2)0]");
      std::vector<int> d{1, 0, -1, 0, 1, 0, 0, -1, 0, 0, 0, 1, -1, 0, 0};
      expect(BandSheafDesc::make(d, 1, Rational(2)), "Mq[(2,2)(3,4)(1,3);m=1;l=2]");
      expect(BandSheafDesc::make(d, 2, Rational(2)), "Mq[(2,2)(3,4)(1,3);m=2;l=2]");
    });
    failures += report(3, "worked examples", t, s);
  }

  {
    Tally t;
    double s = timed([&] {
      for (auto* cat : {&bands, &strings})
        for (auto& e : *cat) {
          DualCheckReport r = fm_dual_check(e, kSeed);
          t.check(r.pass && r.label_side && r.eval_side, "dual check " + to_string(e));
        }
      // stated pairs: Matlis duals of each other; the twisted dual is their
      // pullback along the involution
      auto mod = [](const std::string& s) { return oracle_module(parse_torsion(s)); };
      const std::pair<std::string, std::string> pairs[] = {
          {"Nq[2(3,2)1]", "Nq[0(1,2)(3,2)0]"},
          {"Mq[(2,2)(3,4)(1,3);m=1;l=2]", "Mq[(1,4)(3,2)(2,3);m=1;l=2]"}};
      for (auto& [a, b] : pairs) {
        t.check(is_isomorphic(matlis_dual(mod(a)), mod(b), kSeed).isomorphic(), "Matlis pair " + a + " / " + b);
        t.check(is_isomorphic(twisted_matlis(mod(a)), involution_pullback(mod(b)), kSeed).isomorphic(),
                "twisted pair " + a + " / " + b);
      }
    });
    failures += report(4, "duality", t, s, "  [stated pairs hold as Matlis duals; see README]");
  }

  {
    Tally t;
    double s = timed([&] {
      std::size_t k = 0;
      for (auto* cat : {&bands, &strings}) {
        auto& reps = cat == &bands ? band_reports : string_reports;
        for (auto& e : *cat) {
          Charge c = charge_of(e), img = charge_of(fm_forward(e));
          const VerifyReport& r = reps[k++ % reps.size()];
          t.check(c.degree == 0 && img.rank == 0 && img.degree == c.rank, "charge " + to_string(e));
          t.check(r.length == c.rank && r.rank == c.rank, "length " + to_string(e));
        }
        k = 0;
      }
      IMat2 A = sl2_matrix("A"), B = sl2_matrix("B"), I{{{1, 0}, {0, 1}}}, mI{{{-1, 0}, {0, -1}}};
      t.check(mul(mul(A, B), A) == mul(mul(B, A), B), "ABA = BAB");
      IMat2 ab6 = I;
      for (int i = 0; i < 6; ++i) ab6 = mul(ab6, mul(A, B));
      t.check(ab6 == I, "(AB)^6 = I");
      IMat2 bab = mul(mul(B, A), B);
      t.check(mul(bab, bab) == mI, "(BAB)^2 = -I");
      t.check(sl2_matrix("T") == mI, "T = -I");
      t.check(bab[0][0] == 0 && bab[1][0] == 1, "BAB sends (r,0) to (0,r)");
      for (auto& r : check_relations()) t.check(r.pass, "library relation " + r.name);
    });
    failures += report(5, "length = rank, SL2 relations", t, s);
  }

  {
    Tally t;
    double s = timed([&] {
      std::mt19937_64 rng(kSeed);
      auto uni = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };
      auto spec = [&](bool nonneg) {
        GlueSpec g;
        int n = uni(1, 6), m = uni(1, 3);
        g.topology = uni(0, 1) ? Topology::Cycle : Topology::Chain;
        do {
          g.d.assign(n, 0);
          for (int& v : g.d) v = nonneg ? uni(0, 3) : uni(-3, 3);
        } while (nonneg && std::accumulate(g.d.begin(), g.d.end(), 0) == 0);
        Rational l(uni(1, 9) * (uni(0, 1) ? 1 : -1), uni(1, 5));
        g.glue = g.topology == Topology::Cycle ? jordan_block(m, l) : Mat::identity(m);
        return g;
      };
      auto text = [](const GlueSpec& g) {
        std::string s = g.topology == Topology::Cycle ? "cycle" : "chain";
        for (int v : g.d) s += " " + std::to_string(v);
        return s + " m=" + std::to_string(g.m());
      };
      for (int i = 0; i < kGlueSamples; ++i) {
        GlueSpec g = spec(false);
        long long sum = std::accumulate(g.d.begin(), g.d.end(), 0LL);
        long long chi = g.topology == Topology::Cycle ? g.m() * sum : g.m() * (sum + 1);
        Cohomology c = cohomology(g);
        t.check(c.h0 - c.h1 == chi && euler_characteristic(g) == chi, "chi " + text(g));
      }
      for (int i = 0; i < kNonnegSamples; ++i) {
        GlueSpec g = spec(true);
        long long sum = std::accumulate(g.d.begin(), g.d.end(), 0LL);
        long long h0 = g.topology == Topology::Cycle ? g.m() * sum : g.m() * (1 + sum);
        Cohomology c = cohomology(g);
        t.check(c.h0 == h0 && c.h1 == 0, "nonnegative " + text(g));
      }
    });
    failures += report(6, "cohomology", t, s);
  }

  {
    Tally t;
    int undecided = 0;
    double s = timed([&] {
      std::mt19937_64 rng(kSeed + 7);
      auto uni = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };
      auto random_indec = [&](int budget) -> std::optional<IndecLabel> {
        for (int tries = 0; tries < 50; ++tries) {
          if (uni(0, 1)) {
            int N = uni(1, 3), m = uni(1, 2);
            Pairs q;
            for (int i = 0; i < N; ++i) q.push_back({uni(1, 3), uni(1, 3)});
            if (is_periodic(q)) continue;
            Rational l(uni(1, 7) * (uni(0, 1) ? 1 : -1), uni(1, 4));
            BandLabel b = BandLabel::make(q, m, l);
            if (b.dim() <= budget) return IndecLabel::of(b);
          } else {
            int N = uni(0, 3);
            Pairs q;
            for (int i = 0; i < N; ++i) q.push_back({uni(1, 3), uni(1, 3)});
            int n0 = uni(0, 3), ml = uni(0, 3);
            if (N == 0 && (n0 > 0) == (ml > 0) && n0 + ml > 0) continue;
            StringLabel sl;
            try {
              sl = StringLabel::make(n0, q, ml);
            } catch (const std::invalid_argument&) {
              continue;
            }
            if (sl.dim() <= budget) return IndecLabel::of(sl);
          }
        }
        return std::nullopt;
      };
      for (int i = 0; i < kSums; ++i) {
        int k = uni(1, 3), budget = kMaxSumDim;
        std::vector<IndecLabel> parts;
        std::vector<FiniteLengthModule> mods;
        for (int j = 0; j < k; ++j) {
          auto l = random_indec(budget);
          if (!l) break;
          budget -= l->dim();
          parts.push_back(*l);
          mods.push_back(l->is_band ? oracle::band_from_diagram(l->band) : oracle::string_from_diagram(l->str));
        }
        FiniteLengthModule sum = direct_sum(mods);
        // scramble by a random unimodular-ish change of basis
        Mat p;
        do {
          p = Mat(sum.dim, sum.dim);
          for (int a = 0; a < sum.dim; ++a)
            for (int b = 0; b < sum.dim; ++b) p(a, b) = Rational(uni(0, 3) == 0 ? uni(-2, 2) : 0);
          for (int a = 0; a < sum.dim; ++a) p(a, a) += Rational(1);
        } while (rank(p) != sum.dim);
        IdentifyResult r = identify(conjugate(sum, p), kSeed + i);
        if (!r.identified) ++undecided;
        std::string want;
        for (auto& l : canonical_multiset(parts)) want += l.to_string() + " ";
        std::string got;
        for (auto& l : r.labels) got += l.to_string() + " ";
        std::string why;
        for (auto& d : r.diagnostics) why += " | " + d;
        t.check(r.identified && r.labels == canonical_multiset(parts), "sum " + want + "-> " + got + why);
      }
    });
    failures += report(7, "identify round trip", t, s, "  [undecided: " + std::to_string(undecided) + "]");
  }

  {
    Tally t;
    double s = timed([&] {
      for (auto* cat : {&bands, &strings})
        for (auto& e : *cat) {
          TorsionDesc img = fm_forward(e);
          FiniteLengthModule m = oracle_module(img);
          t.check(is_isomorphic(matlis_dual(matlis_dual(m)), m, kSeed).isomorphic(), "matlis^2 " + to_string(img));
          t.check(is_isomorphic(twisted_matlis(twisted_matlis(m)), m, kSeed).isomorphic(),
                  "twisted^2 " + to_string(img));
        }
      std::mt19937_64 rng(kSeed + 11);
      std::vector<SheafDesc> all = bands;
      all.insert(all.end(), strings.begin(), strings.end());
      std::shuffle(all.begin(), all.end(), rng);
      for (int i = 0; i < kTruncSamples; ++i) {
        const SheafDesc& e = all[i];
        VerifyReport base = verify_fm(e, kSeed);
        VerifyReport a = verify_fm(e, kSeed, base.order), b = verify_fm(e, kSeed, base.order + 1);
        t.check(a.pass && b.pass && a.identified == b.identified && a.length == b.length,
                "truncation " + to_string(e) + " at " + std::to_string(base.order));
      }
    });
    failures += report(8, "involutions, truncation stability", t, s);
  }

  {
    Tally t;
    double s = timed([&] {
      auto count = [](const std::string& g, const std::string& re) {
        std::regex r(re);
        return static_cast<int>(std::distance(std::sregex_iterator(g.begin(), g.end(), r), std::sregex_iterator()));
      };
      std::string sg = emit_dot(parse_torsion("Nq[2(3,2)1]"));
      t.check(count(sg, R"(\n  v\d+ \[)") == 9 && count(sg, "->") == 8, "Nq[2(3,2)1] counts");
      std::string bg = emit_dot(parse_torsion("Mq[(2,2)(3,4)(1,3);m=1;l=2]"));
      t.check(count(bg, R"(\n  v\d+ \[)") == 15 && count(bg, "->") == 15, "band example counts");
      t.check(count(bg, R"(J_1\(2\))") == 1, "one J edge");
      std::string z = emit_dot(parse_torsion("Nq[0()0]"));
      t.check(count(z, R"(\n  v\d+ \[)") == 1 && count(z, "->") == 0, "Nq[0()0] counts");
    });
    failures += report(9, "diagram counts", t, s);
  }

  std::printf("%s\n", failures ? "ACCEPTANCE FAILED" : "ACCEPTANCE PASSED");
  return failures ? 1 : 0;
}
