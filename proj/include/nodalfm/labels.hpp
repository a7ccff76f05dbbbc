#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nodalfm/trunc_ring.hpp"

namespace nodalfm {

using Pairs = std::vector<std::pair<int, int>>;

// Band M(q,m,λ): q = (n_1,m_1)...(n_N,m_N). The rotation of q is kept as
// given; canonical() is the lexicographically least rotation, and two
// labels name the same module iff their canonical forms agree.
struct BandLabel {
  Pairs q;
  int m = 1;
  Rational lambda{1};

  // Throws std::invalid_argument on empty q, entries < 1, m < 1, λ = 0 or periodic q.
  static BandLabel make(Pairs q, int m, Rational lambda);

  BandLabel canonical() const;
  int dim() const;
  std::string to_string() const;  // Mq[(n,m)...;m=k;l=p/q]
  bool operator==(const BandLabel& o) const { return q == o.q && m == o.m && lambda == o.lambda; }
};

// String N(q): q = n0 (m_1,n_1)...(m_N,n_N) m_{N+1}, always stored in the
// canonical form where neither 0(0,a)... -> a... nor ...(b,0)0 -> ...b applies.
struct StringLabel {
  int n0 = 0;
  Pairs pairs;
  int mlast = 0;

  // Canonicalises; throws std::invalid_argument if the result is malformed.
  static StringLabel make(int n0, Pairs pairs, int mlast);
  // From the peak list 0(P_1)...(P_r)0, each peak being (x-leg, y-leg).
  static StringLabel from_peaks(const Pairs& peaks);

  Pairs peaks() const;
  int dim() const;
  std::string to_string() const;  // Nq[n0(m,n)...m]
  bool operator==(const StringLabel& o) const { return n0 == o.n0 && pairs == o.pairs && mlast == o.mlast; }
};

bool is_periodic(const Pairs& q);
Pairs least_rotation(const Pairs& q);

// Jordan block: λ on the diagonal, 1 on the superdiagonal.
Mat jordan_block(int m, const Rational& lambda);

PolyPresentation band_presentation(const BandLabel& b);
PolyPresentation string_presentation(const StringLabel& s);
FiniteLengthModule band_module(const BandLabel& b);
FiniteLengthModule string_module(const StringLabel& s);

// Labelled indecomposable; used by identify and the catalogues.
struct IndecLabel {
  bool is_band = false;
  BandLabel band;
  StringLabel str;

  static IndecLabel of(const BandLabel& b) { return {true, b, {}}; }
  static IndecLabel of(const StringLabel& s) { return {false, {}, s}; }
  IndecLabel canonical() const;
  std::string to_string() const { return is_band ? band.to_string() : str.to_string(); }
  int dim() const { return is_band ? band.dim() : str.dim(); }
  FiniteLengthModule module() const { return is_band ? band_module(band) : string_module(str); }
};

bool operator<(const IndecLabel& a, const IndecLabel& b);
bool operator==(const IndecLabel& a, const IndecLabel& b);

// Sorted canonical forms, for multiset comparison.
std::vector<IndecLabel> canonical_multiset(std::vector<IndecLabel> ls);

}  // namespace nodalfm
