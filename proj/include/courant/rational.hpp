#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <memory>
#include <numeric>
#include <string>
#include <string_view>

#include "courant/error.hpp"

namespace courant {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

namespace detail {

using i128 = __int128;
using u128 = unsigned __int128;

inline u128 abs_u128(i128 v) { return v < 0 ? -static_cast<u128>(v) : static_cast<u128>(v); }

inline u128 gcd_u128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline BigInt bigint_from_u128(u128 u) {
  BigInt r = static_cast<std::uint64_t>(u >> 64);
  r <<= 64;
  r += static_cast<std::uint64_t>(u);
  return r;
}

inline BigInt bigint_from_i128(i128 v) {
  BigInt r = bigint_from_u128(abs_u128(v));
  return v < 0 ? BigInt(-r) : r;
}

// |v| <= INT64_MAX keeps negation closed on the fast path
inline bool fits_small(i128 v) {
  return v >= -static_cast<i128>(INT64_MAX) && v <= static_cast<i128>(INT64_MAX);
}

}  // namespace detail

// Exact rational number, always in lowest terms with positive denominator.
// Values whose numerator and denominator fit in int64 live inline; anything
// larger falls back to boost's cpp_rational. Promotion and demotion are
// automatic, so arithmetic never overflows and stays fast on small data.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(long long v) : num_(v), den_(1) {
    if (v == INT64_MIN) *this = make128(static_cast<detail::i128>(v), 1);
  }
  Rational(long long num, long long den)
      : Rational(make128(static_cast<detail::i128>(num), static_cast<detail::i128>(den))) {}

  static Rational parse(std::string_view s) {
    auto bad = [&] { throw input_error("bad rational literal: '" + std::string(s) + "'"); };
    if (s.empty()) bad();
    std::size_t slash = s.find('/');
    std::string_view ns = s.substr(0, slash == std::string_view::npos ? s.size() : slash);
    std::string_view ds = slash == std::string_view::npos ? std::string_view("1") : s.substr(slash + 1);
    // validate and normalize: cpp_int's parser rejects '+' and reads a
    // leading zero as an octal prefix, so hand it clean decimal digits
    auto clean = [&](std::string_view t) {
      if (t.empty()) bad();
      bool neg = t[0] == '-';
      std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
      if (i == t.size()) bad();
      for (std::size_t j = i; j < t.size(); ++j)
        if (t[j] < '0' || t[j] > '9') bad();
      while (i + 1 < t.size() && t[i] == '0') ++i;
      return (neg ? "-" : "") + std::string(t.substr(i));
    };
    BigInt n{clean(ns)}, d{clean(ds)};
    if (d == 0) throw input_error("zero denominator in rational literal: '" + std::string(s) + "'");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    return from_bigrat(BigRat(n, d));
  }

  bool small() const { return big_ == nullptr; }
  bool is_zero() const { return small() ? num_ == 0 : false; }  // big values are never zero
  bool is_one() const { return small() && num_ == 1 && den_ == 1; }
  bool is_integer() const { return small() ? den_ == 1 : boost::multiprecision::denominator(*big_) == 1; }
  int sign() const {
    if (small()) return num_ < 0 ? -1 : num_ > 0 ? 1 : 0;
    return big_->sign();
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (a.small() && b.small()) {
      detail::i128 n = static_cast<detail::i128>(a.num_) * b.den_ + static_cast<detail::i128>(b.num_) * a.den_;
      detail::i128 d = static_cast<detail::i128>(a.den_) * b.den_;
      return make128(n, d);
    }
    return from_bigrat(a.to_bigrat() + b.to_bigrat());
  }

  friend Rational operator-(const Rational& a, const Rational& b) {
    if (a.small() && b.small()) {
      detail::i128 n = static_cast<detail::i128>(a.num_) * b.den_ - static_cast<detail::i128>(b.num_) * a.den_;
      detail::i128 d = static_cast<detail::i128>(a.den_) * b.den_;
      return make128(n, d);
    }
    return from_bigrat(a.to_bigrat() - b.to_bigrat());
  }

  friend Rational operator*(const Rational& a, const Rational& b) {
    if (a.small() && b.small()) {
      detail::i128 n = static_cast<detail::i128>(a.num_) * b.num_;
      detail::i128 d = static_cast<detail::i128>(a.den_) * b.den_;
      return make128(n, d);
    }
    return from_bigrat(a.to_bigrat() * b.to_bigrat());
  }

  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw error("rational division by zero");
    if (a.small() && b.small()) {
      detail::i128 n = static_cast<detail::i128>(a.num_) * b.den_;
      detail::i128 d = static_cast<detail::i128>(a.den_) * b.num_;
      return make128(n, d);
    }
    return from_bigrat(a.to_bigrat() / b.to_bigrat());
  }

  Rational operator-() const {
    if (small()) {
      Rational r;
      r.num_ = -num_;
      r.den_ = den_;
      return r;
    }
    return from_bigrat(-*big_);
  }

  Rational inverse() const {
    if (is_zero()) throw error("inverse of zero rational");
    return Rational(1) / *this;
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    if (a.small() && b.small()) return a.num_ == b.num_ && a.den_ == b.den_;
    if (a.small() != b.small()) return false;  // canonical: demoted whenever it fits
    return *a.big_ == *b.big_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

  friend bool operator<(const Rational& a, const Rational& b) {
    if (a.small() && b.small())
      return static_cast<detail::i128>(a.num_) * b.den_ < static_cast<detail::i128>(b.num_) * a.den_;
    return a.to_bigrat() < b.to_bigrat();
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  Rational abs() const { return sign() < 0 ? -*this : *this; }

  double to_double() const {
    if (small()) return static_cast<double>(num_) / static_cast<double>(den_);
    return big_->convert_to<double>();
  }

  // canonical text form: "p" when the denominator is 1, else "p/q" with q > 0
  std::string str() const {
    if (small()) {
      std::string s = std::to_string(num_);
      if (den_ != 1) s += "/" + std::to_string(den_);
      return s;
    }
    BigInt n = boost::multiprecision::numerator(*big_);
    BigInt d = boost::multiprecision::denominator(*big_);
    std::string s = n.str();
    if (d != 1) s += "/" + d.str();
    return s;
  }

  BigRat to_bigrat() const {
    if (small()) return BigRat(BigInt(num_), BigInt(den_));
    return *big_;
  }

 private:
  static Rational make128(detail::i128 n, detail::i128 d) {
    if (d == 0) throw error("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    if (n == 0) return Rational();
    detail::u128 g = detail::gcd_u128(detail::abs_u128(n), static_cast<detail::u128>(d));
    if (g > 1) {
      n /= static_cast<detail::i128>(g);
      d /= static_cast<detail::i128>(g);
    }
    if (detail::fits_small(n) && detail::fits_small(d)) {
      Rational r;
      r.num_ = static_cast<long long>(n);
      r.den_ = static_cast<long long>(d);
      return r;
    }
    Rational r;
    r.num_ = 0;
    r.den_ = 1;
    r.big_ = std::make_shared<const BigRat>(detail::bigint_from_i128(n), detail::bigint_from_i128(d));
    return r;
  }

  static Rational from_bigrat(BigRat q) {
    const BigInt& n = boost::multiprecision::numerator(q);
    const BigInt& d = boost::multiprecision::denominator(q);
    if (n >= -INT64_MAX && n <= INT64_MAX && d <= INT64_MAX) {
      Rational r;
      r.num_ = n.convert_to<long long>();
      r.den_ = d.convert_to<long long>();
      return r;
    }
    Rational r;
    r.num_ = 0;
    r.den_ = 1;
    r.big_ = std::make_shared<const BigRat>(std::move(q));
    return r;
  }

  long long num_;
  long long den_;
  std::shared_ptr<const BigRat> big_;
};

inline Rational operator*(long long a, const Rational& b) { return Rational(a) * b; }

}  // namespace courant
