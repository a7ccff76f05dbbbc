#pragma once

#include <cstdint>
#include <vector>

#include "nodalfm/scalar.hpp"
#include "nodalfm/sparse.hpp"

namespace nodalfm {

// Field element modulo a prime chosen at run time (one modulus per thread).
class ModP {
 public:
  ModP() = default;
  ModP(long long v) {  // NOLINT
    long long r = v % static_cast<long long>(p_);
    v_ = static_cast<uint64_t>(r < 0 ? r + static_cast<long long>(p_) : r);
  }
  static void set_modulus(uint64_t p) { p_ = p; }
  static uint64_t modulus() { return p_; }
  static ModP raw(uint64_t v) {
    ModP m;
    m.v_ = v;
    return m;
  }
  uint64_t value() const { return v_; }
  bool is_zero() const { return v_ == 0; }
  ModP operator-() const { return raw(v_ ? p_ - v_ : 0); }
  friend ModP operator+(ModP a, ModP b) {
    uint64_t s = a.v_ + b.v_;
    return raw(s >= p_ ? s - p_ : s);
  }
  friend ModP operator-(ModP a, ModP b) { return raw(a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + p_ - b.v_); }
  friend ModP operator*(ModP a, ModP b) {
    return raw(static_cast<uint64_t>(static_cast<unsigned __int128>(a.v_) * b.v_ % p_));
  }
  ModP inv() const;
  friend ModP operator/(ModP a, ModP b) { return a * b.inv(); }
  ModP& operator+=(ModP b) { return *this = *this + b; }
  ModP& operator-=(ModP b) { return *this = *this - b; }
  ModP& operator*=(ModP b) { return *this = *this * b; }
  friend bool operator==(ModP a, ModP b) { return a.v_ == b.v_; }

 private:
  static inline thread_local uint64_t p_ = 2305843009213693951ULL;  // 2^61 - 1
  uint64_t v_ = 0;
};

// Null space over Q of a sparse system, as columns in reduced form (one
// column per free variable, identity on the free variables). Computed modulo
// several large primes, lifted by CRT and rational reconstruction, and then
// checked exactly against every equation; falls back to exact elimination
// if the lift does not verify.
Matrix<Rational> modular_kernel(int ncols, const std::vector<SparseVec<Rational>>& eqs);

}  // namespace nodalfm
