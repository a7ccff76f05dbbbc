#include "nodalfm/poly.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace nodalfm {

UPoly upoly_trim(UPoly p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
  return p;
}

UPoly upoly_derivative(const UPoly& p) {
  UPoly d;
  for (std::size_t k = 1; k < p.size(); ++k) d.push_back(Rational(static_cast<long long>(k)) * p[k]);
  return upoly_trim(d);
}

UPoly upoly_mul(const UPoly& a, const UPoly& b) {
  if (a.empty() || b.empty()) return {};
  UPoly c(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return upoly_trim(c);
}

void upoly_divmod(const UPoly& a, const UPoly& b0, UPoly& q, UPoly& r) {
  UPoly b = upoly_trim(b0);
  if (b.empty()) throw std::domain_error("polynomial division by zero");
  r = upoly_trim(a);
  q.assign(r.size() >= b.size() ? r.size() - b.size() + 1 : 0, Rational(0));
  Rational lead = b.back().inv();
  while (r.size() >= b.size()) {
    std::size_t shift = r.size() - b.size();
    Rational f = r.back() * lead;
    q[shift] = f;
    for (std::size_t k = 0; k < b.size(); ++k) r[shift + k] -= f * b[k];
    r = upoly_trim(r);
  }
  q = upoly_trim(q);
}

UPoly upoly_monic(const UPoly& p0) {
  UPoly p = upoly_trim(p0);
  if (p.empty()) return p;
  Rational l = p.back().inv();
  for (auto& c : p) c *= l;
  return p;
}

UPoly upoly_gcd(const UPoly& a0, const UPoly& b0) {
  UPoly a = upoly_trim(a0), b = upoly_trim(b0);
  while (!b.empty()) {
    UPoly q, r;
    upoly_divmod(a, b, q, r);
    a = std::move(b);
    b = upoly_monic(r);
  }
  return upoly_monic(a);
}

UPoly upoly_squarefree_part(const UPoly& p) {
  UPoly g = upoly_gcd(p, upoly_derivative(p));
  UPoly q, r;
  upoly_divmod(p, g, q, r);
  return upoly_monic(q);
}

Rational upoly_eval(const UPoly& p, const Rational& x) {
  Rational v(0);
  for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * x + *it;
  return v;
}

std::string upoly_to_string(const UPoly& p, const std::string& var) {
  if (p.empty()) return "0";
  std::string s;
  for (int k = static_cast<int>(p.size()) - 1; k >= 0; --k) {
    const Rational& c = p[k];
    if (c.is_zero()) continue;
    std::string cs = c.to_string();
    bool neg = c.sign() < 0;
    if (neg) cs = cs.substr(1);
    if (!s.empty())
      s += neg ? " - " : " + ";
    else if (neg)
      s += "-";
    std::string mono = k == 0 ? "" : (k == 1 ? var : var + "^" + std::to_string(k));
    if (mono.empty())
      s += cs;
    else if (cs == "1")
      s += mono;
    else
      s += cs + "*" + mono;
  }
  return s;
}

namespace {

using cld = std::complex<long double>;

// Aberth iteration on a monic polynomial with long double coefficients.
std::vector<cld> approx_roots(const std::vector<long double>& c) {
  int n = static_cast<int>(c.size()) - 1;
  std::vector<cld> z(n);
  long double bound = 0;
  for (int k = 0; k < n; ++k) bound = std::max(bound, std::abs(c[k]));
  bound = 1 + bound;
  for (int k = 0; k < n; ++k) z[k] = std::polar(bound * 0.7L, 2 * M_PI * (k + 0.25L) / n);
  auto eval = [&](cld x, cld& dp) {
    cld p = 1;
    dp = 0;
    for (int k = n - 1; k >= 0; --k) {
      dp = dp * x + p;
      p = p * x + c[k];
    }
    return p;
  };
  for (int it = 0; it < 800; ++it) {
    long double moved = 0;
    for (int k = 0; k < n; ++k) {
      cld dp;
      cld p = eval(z[k], dp);
      if (p == cld(0)) continue;
      cld ratio = p / dp;
      cld s = 0;
      for (int j = 0; j < n; ++j)
        if (j != k) s += 1.0L / (z[k] - z[j]);
      cld w = ratio / (1.0L - ratio * s);
      z[k] -= w;
      moved = std::max(moved, std::abs(w) / (1 + std::abs(z[k])));
    }
    if (moved < 1e-17L) break;
  }
  return z;
}

// Integer coefficients of a scalar multiple of p.
std::vector<mpz_class> integer_coeffs(const UPoly& p) {
  mpz_class l = 1;
  for (auto& v : p) {
    mpz_class d = v.denominator();
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
  }
  std::vector<mpz_class> out;
  for (auto& v : p) out.push_back(v.numerator() * (l / v.denominator()));
  return out;
}

// Newton refinement of a simple real root, at a precision that can resolve
// any rational root of p, followed by the continued-fraction convergents
// whose denominators divide the leading coefficient's size bound.
std::vector<Rational> rational_candidates(const std::vector<mpz_class>& c, long double x0) {
  std::size_t bits = 0;
  for (auto& v : c) bits = std::max(bits, mpz_sizeinbase(v.get_mpz_t(), 2));
  mp_bitcnt_t prec = static_cast<mp_bitcnt_t>(4 * bits + 128);
  mpf_class x(static_cast<double>(x0), prec), f(0, prec), df(0, prec), step(0, prec), eps(1, prec);
  mpf_div_2exp(eps.get_mpf_t(), eps.get_mpf_t(), prec - 16);
  for (int it = 0; it < 400; ++it) {
    f = 0, df = 0;
    for (std::size_t k = c.size(); k-- > 0;) {
      df = df * x + f;
      f = f * x + mpf_class(c[k], prec);
    }
    if (df == 0) break;
    step = f / df;
    x -= step;
    if (abs(step) <= eps * (1 + abs(x))) break;
  }
  std::vector<Rational> out;
  mpz_class bound = abs(c.back());
  mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0, a;
  mpf_class r(x, prec), fl(0, prec);
  for (int it = 0; it < 4 * static_cast<int>(bits) + 64; ++it) {
    mpf_floor(fl.get_mpf_t(), r.get_mpf_t());
    a = mpz_class(fl);
    mpz_class h2 = a * h1 + h0, k2 = a * k1 + k0;
    if (k2 > bound) break;
    out.emplace_back(mpq_class(h2, k2));
    h0 = h1, h1 = h2, k0 = k1, k1 = k2;
    mpf_class frac = r - fl;
    if (frac <= eps) break;
    r = 1 / frac;
  }
  return out;
}

}  // namespace

std::vector<Rational> upoly_rational_roots(const UPoly& p0) {
  UPoly p = upoly_squarefree_part(p0);
  std::vector<Rational> roots;
  if (p.size() <= 1) return roots;
  if (p.size() == 2) return {-p[0] / p[1]};
  std::vector<long double> c;
  for (auto& v : p) c.push_back(static_cast<long double>(v.to_double()));
  auto ic = integer_coeffs(p);
  for (const cld& z : approx_roots(c)) {
    if (std::abs(z.imag()) > 1e-6L * (1 + std::abs(z))) continue;
    for (const Rational& cand : rational_candidates(ic, z.real())) {
      if (upoly_eval(p, cand).is_zero()) {
        bool dup = false;
        for (auto& r : roots) dup = dup || r == cand;
        if (!dup) roots.push_back(cand);
        break;
      }
    }
  }
  return roots;
}

}  // namespace nodalfm
