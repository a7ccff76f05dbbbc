#pragma once

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "nodalfm/labels.hpp"

namespace nodalfm {

// B(d,m,λ): push-forward of L(d,λ) ⊗ F_m from the cycle of n = |d| lines.
// make() does not reject periodic d; the parser does (see ss_deg0_shape).
struct BandSheafDesc {
  std::vector<int> d;
  int m = 1;
  Rational lambda{1};

  static BandSheafDesc make(std::vector<int> d, int m, Rational lambda);
  int n() const { return static_cast<int>(d.size()); }
  bool operator==(const BandSheafDesc& o) const { return d == o.d && m == o.m && lambda == o.lambda; }
};

// S(d): push-forward of L(d) from the chain of n = |d| lines.
struct StringSheafDesc {
  std::vector<int> d;

  static StringSheafDesc make(std::vector<int> d);
  int n() const { return static_cast<int>(d.size()); }
  bool operator==(const StringSheafDesc& o) const { return d == o.d; }
};

using SheafDesc = std::variant<BandSheafDesc, StringSheafDesc>;

// Torsion sheaves: a band or string module at the node, or the structure
// sheaf of a fat point of length len at the smooth point P(λ).
struct TorsionDesc {
  enum class Kind { SingularBand, SingularString, SmoothPoint };
  Kind kind = Kind::SingularString;
  BandLabel band;
  StringLabel str;
  Rational lambda{1};
  int len = 1;

  static TorsionDesc of(const BandLabel& b) { return {Kind::SingularBand, b, {}, Rational(1), 1}; }
  static TorsionDesc of(const StringLabel& s) { return {Kind::SingularString, {}, s, Rational(1), 1}; }
  static TorsionDesc smooth_point(Rational lambda, int len);

  bool is_singular() const { return kind != Kind::SmoothPoint; }
  IndecLabel label() const;  // singular kinds only
  TorsionDesc canonical() const;
};

bool operator==(const TorsionDesc& a, const TorsionDesc& b);  // compares canonical forms

struct Charge {
  long long rank = 0;
  long long degree = 0;
  bool operator==(const Charge&) const = default;
};

Charge charge_of(const SheafDesc& e);
Charge charge_of(const TorsionDesc& t);

// B(d,m,λ)^∨ = B(−d,m,λ⁻¹); S(d)^∨ = S(κ−d).
SheafDesc dual_desc(const SheafDesc& e);
// ⊗ O(p₀)^k
SheafDesc twist_p0(const SheafDesc& e, int k);

struct Shape {
  enum class Kind { Band, String, Atiyah, NotSS };
  Kind kind = Kind::NotSS;
  Pairs runs;  // (n_i, m_i)
  std::string reason;  // for NotSS
};

Shape ss_deg0_shape(const SheafDesc& e);

std::string to_string(const SheafDesc& e);   // B[d=(..);m=k;l=p/q] or S[d=(..)]
std::string to_string(const TorsionDesc& t);  // Mq[..], Nq[..] or P[l=p/q;len=k]
const char* shape_name(Shape::Kind k);

}  // namespace nodalfm
