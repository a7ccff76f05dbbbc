#pragma once

#include <map>
#include <string>
#include <vector>

#include "nodalfm/module.hpp"

namespace nodalfm {

// Polynomial in R = k[[x,y]]/(xy) with no truncation: c + Σ a_i x^i + Σ b_j y^j.
struct Poly {
  Rational c;
  std::map<int, Rational> xs, ys;  // exponent >= 1 -> nonzero coefficient

  Poly() = default;
  Poly(Rational v) : c(std::move(v)) {}  // NOLINT
  static Poly x(int e, Rational coef = 1);
  static Poly y(int e, Rational coef = 1);

  bool is_zero() const { return c.is_zero() && xs.empty() && ys.empty(); }
  int max_exponent() const;
  int exponent_sum() const;
  std::string to_string() const;

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(const Rational& s, const Poly& a);
  friend bool operator==(const Poly& a, const Poly& b) { return a.c == b.c && a.xs == b.xs && a.ys == b.ys; }
};

// Element of R_N = k[x,y]/(xy, x^N, y^N).
struct TruncElement {
  int order = 1;
  Rational constant;
  std::vector<Rational> xcoeffs, ycoeffs;  // x^1..x^{N-1}, y^1..y^{N-1}

  TruncElement() = default;
  explicit TruncElement(int n);
  // Truncates p; sets *lost when a nonzero term of degree >= n is dropped.
  static TruncElement from_poly(int n, const Poly& p, bool* lost = nullptr);
  Poly to_poly() const;

  bool is_zero() const;
  bool is_unit() const { return !constant.is_zero(); }
  int max_exponent() const;
  std::string to_string() const;

  friend TruncElement operator+(const TruncElement& a, const TruncElement& b);
  friend TruncElement operator-(const TruncElement& a, const TruncElement& b);
  friend TruncElement operator*(const TruncElement& a, const TruncElement& b);
  friend TruncElement operator*(const Rational& s, const TruncElement& a);
  friend bool operator==(const TruncElement& a, const TruncElement& b);
};

TruncElement mul(const TruncElement& a, const TruncElement& b);

enum class PieceKind { FullR, XOnly, YOnly };

struct TruncPiece {
  PieceKind kind = PieceKind::FullR;
  int order = 1;
};

std::string piece_name(PieceKind k);

// Relation matrix rel[row][col] over the target pieces; sources are free.
struct Presentation {
  int order = 1;
  std::vector<PieceKind> target;
  std::vector<std::vector<TruncElement>> rel;
  bool lossy = false;  // some relation term had degree >= order

  int rows() const { return static_cast<int>(target.size()); }
  int cols() const { return rel.empty() ? 0 : static_cast<int>(rel[0].size()); }
  int max_exponent() const;
  void check_shape() const;
};

// Untruncated presentation, converted to a Presentation at a chosen order.
struct PolyPresentation {
  std::vector<PieceKind> target;
  std::vector<std::vector<Poly>> rel;  // rows x cols

  int rows() const { return static_cast<int>(target.size()); }
  int cols() const { return rel.empty() ? 0 : static_cast<int>(rel[0].size()); }
  int max_exponent() const;
  int exponent_sum() const;
  Presentation at_order(int n) const;
  std::string to_string() const;
};

FiniteLengthModule cokernel(const Presentation& p);

// Cokernel at an order where it has provably stabilised: starting from
// max exponent + 1, raise N until dim at N equals dim at N+1 (then the
// ideal (x^N, y^N) kills the module by Nakayama). Returns the order used.
FiniteLengthModule cokernel_stable(const PolyPresentation& p, int* order_used = nullptr);

// Order suggested by the closed formula (max exponent + exponent sum + 2).
int default_order(const PolyPresentation& p);

bool stability_check(const Presentation& p, uint64_t seed = 0);

// Same presentation re-read at order n (n >= p.order, exact; smaller n truncates).
Presentation reorder(const Presentation& p, int n);

Presentation minimal_presentation(const Presentation& p);

}  // namespace nodalfm
