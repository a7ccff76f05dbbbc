#include "nodalfm/sheaf_desc.hpp"

#include <numeric>

namespace nodalfm {

BandSheafDesc BandSheafDesc::make(std::vector<int> d, int m, Rational lambda) {
  if (d.empty()) throw std::invalid_argument("band descriptor needs n >= 1");
  if (m < 1) throw std::invalid_argument("band descriptor needs m >= 1");
  if (lambda.is_zero()) throw std::invalid_argument("lambda must be nonzero");
  return {std::move(d), m, std::move(lambda)};
}

StringSheafDesc StringSheafDesc::make(std::vector<int> d) {
  if (d.empty()) throw std::invalid_argument("string descriptor needs n >= 1");
  return {std::move(d)};
}

TorsionDesc TorsionDesc::smooth_point(Rational lambda, int len) {
  if (lambda.is_zero()) throw std::invalid_argument("lambda must be nonzero");
  if (len < 1) throw std::invalid_argument("length must be >= 1");
  TorsionDesc t;
  t.kind = Kind::SmoothPoint;
  t.lambda = std::move(lambda);
  t.len = len;
  return t;
}

IndecLabel TorsionDesc::label() const {
  switch (kind) {
    case Kind::SingularBand: return IndecLabel::of(band);
    case Kind::SingularString: return IndecLabel::of(str);
    default: throw std::invalid_argument("smooth point has no label at the node");
  }
}

TorsionDesc TorsionDesc::canonical() const {
  TorsionDesc t = *this;
  if (kind == Kind::SingularBand) t.band = band.canonical();
  return t;
}

bool operator==(const TorsionDesc& a, const TorsionDesc& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case TorsionDesc::Kind::SingularBand: return a.band.canonical() == b.band.canonical();
    case TorsionDesc::Kind::SingularString: return a.str == b.str;
    default: return a.lambda == b.lambda && a.len == b.len;
  }
}

namespace {

long long sum(const std::vector<int>& d) { return std::accumulate(d.begin(), d.end(), 0LL); }

}  // namespace

Charge charge_of(const SheafDesc& e) {
  if (auto b = std::get_if<BandSheafDesc>(&e)) return {1LL * b->m * b->n(), b->m * sum(b->d)};
  const auto& s = std::get<StringSheafDesc>(e);
  return {s.n(), 1 + sum(s.d)};
}

Charge charge_of(const TorsionDesc& t) {
  if (t.kind == TorsionDesc::Kind::SmoothPoint) return {0, t.len};
  return {0, t.label().dim()};
}

SheafDesc dual_desc(const SheafDesc& e) {
  if (auto b = std::get_if<BandSheafDesc>(&e)) {
    BandSheafDesc r = *b;
    for (int& v : r.d) v = -v;
    r.lambda = b->lambda.inv();
    return r;
  }
  StringSheafDesc r = std::get<StringSheafDesc>(e);
  int n = r.n();
  for (int& v : r.d) v = -v;
  if (n == 1) {
    r.d[0] -= 2;
  } else {
    r.d.front() -= 1;
    r.d.back() -= 1;
  }
  return r;
}

SheafDesc twist_p0(const SheafDesc& e, int k) {
  SheafDesc r = e;
  std::visit([k](auto& x) {
    for (int& v : x.d) v += k;
  }, r);
  return r;
}

namespace {

Shape not_ss(std::string why) { return {Shape::Kind::NotSS, {}, std::move(why)}; }

bool unit_entries(const std::vector<int>& d) {
  for (int v : d)
    if (v < -1 || v > 1) return false;
  return true;
}

}  // namespace

Shape ss_deg0_shape(const SheafDesc& e) {
  Charge c = charge_of(e);
  if (c.degree != 0) return not_ss("degree " + std::to_string(c.degree) + " is not zero");
  if (auto b = std::get_if<BandSheafDesc>(&e)) {
    const auto& d = b->d;
    int n = b->n();
    if (n == 1 && d[0] == 0) return {Shape::Kind::Atiyah, {}, {}};
    if (!unit_entries(d)) return not_ss("entries outside {-1,0,1}");
    int start = -1;
    for (int i = 0; i < n && start < 0; ++i)
      if (d[i] == 1) start = i;
    if (start < 0) return not_ss("no entry 1");
    // read cyclically from the first 1: 1 0^(n_i-1) -1 0^(m_i-1)
    Pairs runs;
    int expect = 1, last = 0;
    for (int k = 0; k <= n; ++k) {
      int i = (start + k) % n;
      if (d[i] == 0 && k < n) continue;
      if (d[i] != expect && (k < n || expect == -1)) return not_ss("signs do not alternate");
      if (k > 0) {
        if (expect == -1)
          runs.push_back({k - last, 0});
        else
          runs.back().second = k - last;
      }
      last = k;
      expect = -expect;
    }
    Pairs probe = runs;
    if (is_periodic(probe)) return not_ss("d is periodic");
    return {Shape::Kind::Band, runs, {}};
  }
  const auto& d = std::get<StringSheafDesc>(e).d;
  if (!unit_entries(d)) return not_ss("entries outside {-1,0,1}");
  // 0^(n_1) -1 0^(m_1) 1 0^(n_2) -1 ... -1 0^(m_N)
  Pairs runs;
  int expect = -1, zeros = 0;
  for (int v : d) {
    if (v == 0) {
      ++zeros;
      continue;
    }
    if (v != expect) return not_ss("signs do not alternate");
    if (v == -1)
      runs.push_back({zeros, 0});
    else
      runs.back().second = zeros;
    zeros = 0;
    expect = -expect;
  }
  if (expect != 1) return not_ss("d does not end with -1 0...0");
  runs.back().second = zeros;
  return {Shape::Kind::String, runs, {}};
}

namespace {

std::string vec_string(const std::vector<int>& d) {
  std::string s = "(";
  for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
  return s + ")";
}

}  // namespace

std::string to_string(const SheafDesc& e) {
  if (auto b = std::get_if<BandSheafDesc>(&e))
    return "B[d=" + vec_string(b->d) + ";m=" + std::to_string(b->m) + ";l=" + b->lambda.to_string() + "]";
  return "S[d=" + vec_string(std::get<StringSheafDesc>(e).d) + "]";
}

std::string to_string(const TorsionDesc& t) {
  if (t.kind == TorsionDesc::Kind::SmoothPoint)
    return "P[l=" + t.lambda.to_string() + ";len=" + std::to_string(t.len) + "]";
  return t.label().to_string();
}

const char* shape_name(Shape::Kind k) {
  switch (k) {
    case Shape::Kind::Band: return "BandShape";
    case Shape::Kind::String: return "StringShape";
    case Shape::Kind::Atiyah: return "Atiyah";
    default: return "NotSS";
  }
}

}  // namespace nodalfm
