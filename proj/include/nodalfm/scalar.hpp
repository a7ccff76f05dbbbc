#pragma once

#include <concepts>
#include <cstdint>
#include <limits>
#include <memory>
#include <ostream>
#include <string>

#include <gmpxx.h>

namespace nodalfm {

// Exact rational. Values fitting in int64 take a fast path; anything larger
// lives in a heap mpq_class and is demoted again when it shrinks.
class Rational {
 public:
  Rational() = default;
  template <std::signed_integral T>
  Rational(T v) : num_(static_cast<int64_t>(v)) {  // NOLINT implicit on purpose
    if constexpr (sizeof(T) >= sizeof(int64_t))
      if (v == std::numeric_limits<T>::min()) set_from(mpq_class(mpz_class(std::to_string(v))));
  }
  Rational(long long n, long long d);
  explicit Rational(const mpq_class& q);

  Rational(const Rational& o) : num_(o.num_), den_(o.den_) {
    if (o.big_) big_ = std::make_unique<mpq_class>(*o.big_);
  }
  Rational(Rational&&) noexcept = default;
  Rational& operator=(const Rational& o) {
    if (this != &o) {
      num_ = o.num_;
      den_ = o.den_;
      big_ = o.big_ ? std::make_unique<mpq_class>(*o.big_) : nullptr;
    }
    return *this;
  }
  Rational& operator=(Rational&&) noexcept = default;

  // "p/q", "p", "-p/q"; throws std::invalid_argument
  static Rational parse(const std::string& s);

  bool is_zero() const { return !big_ && num_ == 0; }
  bool is_one() const { return !big_ && num_ == 1 && den_ == 1; }
  bool is_integer() const;
  bool is_small() const { return !big_; }
  int sign() const;

  mpq_class to_mpq() const;
  mpz_class numerator() const;
  mpz_class denominator() const;
  double to_double() const;
  std::string to_string() const;

  Rational operator-() const;
  Rational inv() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& b) { return *this = *this + b; }
  Rational& operator-=(const Rational& b) { return *this = *this - b; }
  Rational& operator*=(const Rational& b) { return *this = *this * b; }
  Rational& operator/=(const Rational& b) { return *this = *this / b; }

  friend bool operator==(const Rational& a, const Rational& b);
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b);

  std::size_t hash() const;

 private:
  void set_from(const mpq_class& q);

  int64_t num_ = 0;
  int64_t den_ = 1;
  std::unique_ptr<mpq_class> big_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

// Prime field Z/P. The modulus is part of the type.
template <uint64_t P>
class Fp {
  static_assert(P >= 2 && P < (1ULL << 62), "modulus out of range");

 public:
  Fp() = default;
  Fp(long long v) {  // NOLINT
    long long r = v % static_cast<long long>(P);
    v_ = static_cast<uint64_t>(r < 0 ? r + static_cast<long long>(P) : r);
  }
  static constexpr uint64_t modulus() { return P; }
  uint64_t value() const { return v_; }
  bool is_zero() const { return v_ == 0; }
  bool is_one() const { return v_ == 1; }

  Fp operator-() const { return raw(v_ ? P - v_ : 0); }
  Fp inv() const {
    if (!v_) throw std::domain_error("inverse of zero");
    return pow(P - 2);
  }
  Fp pow(uint64_t e) const {
    Fp r = raw(1), b = *this;
    for (; e; e >>= 1, b = b * b)
      if (e & 1) r = r * b;
    return r;
  }
  friend Fp operator+(Fp a, Fp b) {
    uint64_t s = a.v_ + b.v_;
    return raw(s >= P ? s - P : s);
  }
  friend Fp operator-(Fp a, Fp b) { return raw(a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + P - b.v_); }
  friend Fp operator*(Fp a, Fp b) {
    return raw(static_cast<uint64_t>(static_cast<unsigned __int128>(a.v_) * b.v_ % P));
  }
  friend Fp operator/(Fp a, Fp b) { return a * b.inv(); }
  Fp& operator+=(Fp b) { return *this = *this + b; }
  Fp& operator-=(Fp b) { return *this = *this - b; }
  Fp& operator*=(Fp b) { return *this = *this * b; }
  Fp& operator/=(Fp b) { return *this = *this / b; }
  friend bool operator==(Fp a, Fp b) { return a.v_ == b.v_; }
  friend bool operator!=(Fp a, Fp b) { return a.v_ != b.v_; }
  std::string to_string() const { return std::to_string(v_); }

 private:
  static Fp raw(uint64_t v) {
    Fp f;
    f.v_ = v;
    return f;
  }
  uint64_t v_ = 0;
};

template <uint64_t P>
std::ostream& operator<<(std::ostream& os, Fp<P> a) {
  return os << a.value();
}

}  // namespace nodalfm

template <>
struct std::hash<nodalfm::Rational> {
  std::size_t operator()(const nodalfm::Rational& r) const { return r.hash(); }
};
