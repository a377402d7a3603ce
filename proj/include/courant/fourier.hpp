#pragma once

#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "courant/error.hpp"
#include "courant/rational.hpp"

namespace courant {

// Gaussian rational a + b*i
struct Gauss {
  Rational re, im;

  Gauss() = default;
  Gauss(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  static Gauss real(Rational r) { return Gauss(std::move(r), Rational()); }

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  Gauss conj() const { return Gauss(re, -im); }

  friend Gauss operator+(const Gauss& a, const Gauss& b) { return {a.re + b.re, a.im + b.im}; }
  friend Gauss operator-(const Gauss& a, const Gauss& b) { return {a.re - b.re, a.im - b.im}; }
  friend Gauss operator*(const Gauss& a, const Gauss& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  Gauss operator-() const { return {-re, -im}; }
  friend bool operator==(const Gauss& a, const Gauss& b) { return a.re == b.re && a.im == b.im; }
};

// Trigonometric polynomial on the 2-torus: finitely many terms c(a,b)·e^{i(aθ₁+bθ₂)}
// with c(-a,-b) = conj(c(a,b)), so the value is real. Stored with all
// frequencies explicit, zero coefficients dropped.
class FourierPoly {
 public:
  using Freq = std::pair<int, int>;

  FourierPoly() = default;

  static FourierPoly constant(const Rational& c) {
    FourierPoly f;
    f.add_term({0, 0}, Gauss::real(c));
    return f;
  }

  static FourierPoly one() { return constant(Rational(1)); }

  // cos(aθ₁+bθ₂) and sin(aθ₁+bθ₂)
  static FourierPoly cosine(int a, int b) {
    FourierPoly f;
    f.add_term({a, b}, Gauss(Rational(1, 2), Rational()));
    f.add_term({-a, -b}, Gauss(Rational(1, 2), Rational()));
    return f;
  }

  static FourierPoly sine(int a, int b) {
    FourierPoly f;
    f.add_term({a, b}, Gauss(Rational(), Rational(-1, 2)));
    f.add_term({-a, -b}, Gauss(Rational(), Rational(1, 2)));
    return f;
  }

  bool is_zero() const { return t_.empty(); }
  const std::map<Freq, Gauss>& terms() const { return t_; }

  Gauss coeff(int a, int b) const {
    auto it = t_.find({a, b});
    return it == t_.end() ? Gauss() : it->second;
  }

  int max_frequency() const {
    int m = 0;
    for (const auto& [f, c] : t_) m = std::max({m, std::abs(f.first), std::abs(f.second)});
    return m;
  }

  friend FourierPoly operator+(const FourierPoly& a, const FourierPoly& b) {
    FourierPoly r = a;
    for (const auto& [f, c] : b.t_) r.add_term(f, c);
    return r;
  }

  friend FourierPoly operator-(const FourierPoly& a, const FourierPoly& b) { return a + (-b); }

  FourierPoly operator-() const {
    FourierPoly r;
    for (const auto& [f, c] : t_) r.t_.emplace(f, -c);
    return r;
  }

  friend FourierPoly operator*(const FourierPoly& a, const FourierPoly& b) {
    FourierPoly r;
    for (const auto& [fa, ca] : a.t_)
      for (const auto& [fb, cb] : b.t_)
        r.add_term({fa.first + fb.first, fa.second + fb.second}, ca * cb);
    return r;
  }

  FourierPoly scaled(const Rational& c) const {
    FourierPoly r;
    if (c.is_zero()) return r;
    for (const auto& [f, g] : t_) r.t_.emplace(f, g * Gauss::real(c));
    return r;
  }

  FourierPoly& operator+=(const FourierPoly& o) { return *this = *this + o; }
  FourierPoly& operator-=(const FourierPoly& o) { return *this = *this - o; }
  FourierPoly& operator*=(const FourierPoly& o) { return *this = *this * o; }

  // d/dθ₁ (var 0) or d/dθ₂ (var 1): multiply the (a,b) term by ia or ib
  FourierPoly diff(int var) const {
    if (var < 0 || var > 1) throw error("torus derivative variable out of range");
    FourierPoly r;
    for (const auto& [f, c] : t_) {
      int k = var == 0 ? f.first : f.second;
      if (k == 0) continue;
      r.add_term(f, c * Gauss(Rational(), Rational(k)));
    }
    return r;
  }

  // fiberwise integral over the first circle with unit total measure:
  // e^{iaθ₁} averages to zero unless a = 0, so keep the a = 0 slice
  FourierPoly integrate_first() const {
    FourierPoly r;
    for (const auto& [f, c] : t_)
      if (f.first == 0) r.t_.emplace(f, c);
    return r;
  }

  // exact value at θ₁ = θ₂ = 0 (every basis wave is 1 there); reality makes it rational
  Rational value_at_origin() const {
    Gauss s;
    for (const auto& [f, c] : t_) s = s + c;
    if (!s.im.is_zero()) throw error("fourier data violates the reality constraint");
    return s.re;
  }

  double eval(double t1, double t2) const {  // numeric, for cross-checks only
    double v = 0;
    for (const auto& [f, c] : t_) {
      double phase = f.first * t1 + f.second * t2;
      v += c.re.to_double() * std::cos(phase) - c.im.to_double() * std::sin(phase);
    }
    return v;
  }

  bool satisfies_reality() const {
    for (const auto& [f, c] : t_)
      if (!(coeff(-f.first, -f.second) == c.conj())) return false;
    return true;
  }

  friend bool operator==(const FourierPoly& a, const FourierPoly& b) { return a.t_ == b.t_; }
  friend bool operator!=(const FourierPoly& a, const FourierPoly& b) { return !(a == b); }

  // readable real form: constant + a·cos(...) + b·sin(...) per frequency pair
  std::string str() const {
    if (t_.empty()) return "0";
    std::string out;
    auto append = [&out](const Rational& mag, bool neg, const std::string& body) {
      if (out.empty()) {
        if (neg) out += "-";
      } else {
        out += neg ? " - " : " + ";
      }
      if (body.empty()) {
        out += mag.str();
      } else {
        if (!mag.is_one()) out += mag.str() + "*";
        out += body;
      }
    };
    for (const auto& [f, c] : t_) {
      if (f < Freq{0, 0}) continue;  // the conjugate term carries the same data
      std::string arg;
      auto angle = [&](int k, const char* name) {
        if (k == 0) return;
        if (!arg.empty()) arg += k < 0 ? "-" : "+";
        else if (k < 0) arg += "-";
        if (std::abs(k) != 1) arg += std::to_string(std::abs(k)) + "*";
        arg += name;
      };
      angle(f.first, "t1");
      angle(f.second, "t2");
      if (f == Freq{0, 0}) {
        append(c.re.abs(), c.re.sign() < 0, "");
        continue;
      }
      Rational cos_amp = c.re + c.re, sin_amp = -(c.im + c.im);
      if (!cos_amp.is_zero()) append(cos_amp.abs(), cos_amp.sign() < 0, "cos(" + arg + ")");
      if (!sin_amp.is_zero()) append(sin_amp.abs(), sin_amp.sign() < 0, "sin(" + arg + ")");
    }
    return out.empty() ? "0" : out;
  }

  // building block for JSON input; enforces canonical storage
  void add_term(Freq f, const Gauss& c) {
    if (c.is_zero()) return;
    auto it = t_.find(f);
    if (it == t_.end()) {
      t_.emplace(f, c);
    } else {
      Gauss s = it->second + c;
      if (s.is_zero()) t_.erase(it);
      else it->second = s;
    }
  }

 private:
  std::map<Freq, Gauss> t_;
};

}  // namespace courant
