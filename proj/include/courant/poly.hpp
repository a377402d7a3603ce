#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "courant/error.hpp"
#include "courant/rational.hpp"

namespace courant {

// exponent vector, inline storage; 63 variables is enough for every bundle
// this library builds (worst case: dim-7 base with a 49-dim fiber on top)
struct Mono {
  static constexpr int max_vars = 63;

  std::uint8_t n = 0;
  std::array<std::uint8_t, max_vars> e{};

  static Mono unit(int nvars) {
    check_nvars(nvars);
    Mono m;
    m.n = static_cast<std::uint8_t>(nvars);
    return m;
  }

  static Mono of(int nvars, std::initializer_list<int> exps) {
    Mono m = unit(nvars);
    int i = 0;
    for (int v : exps) m.set(i++, v);
    return m;
  }

  static void check_nvars(int nvars) {
    if (nvars < 0 || nvars > max_vars) throw error("variable count out of range");
  }

  int operator[](int i) const { return e[static_cast<std::size_t>(i)]; }
  void set(int i, int v) {
    if (i < 0 || i >= n) throw error("monomial variable index out of range");
    if (v < 0 || v > 255) throw error("monomial exponent out of range");
    e[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v);
  }

  int degree() const {
    int d = 0;
    for (int i = 0; i < n; ++i) d += e[static_cast<std::size_t>(i)];
    return d;
  }

  int degree_in(int lo, int hi) const {  // total degree over variables [lo, hi)
    int d = 0;
    for (int i = lo; i < hi && i < n; ++i) d += e[static_cast<std::size_t>(i)];
    return d;
  }

  Mono times(const Mono& o) const {
    Mono r = *this;
    for (int i = 0; i < n; ++i) {
      int s = e[static_cast<std::size_t>(i)] + o.e[static_cast<std::size_t>(i)];
      if (s > 255) throw error("monomial exponent overflow");
      r.e[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(s);
    }
    return r;
  }

  friend bool operator==(const Mono& a, const Mono& b) { return a.n == b.n && a.e == b.e; }
};

// graded lexicographic, descending (leading monomial first)
struct GrlexDesc {
  bool operator()(const Mono& a, const Mono& b) const {
    int da = a.degree(), db = b.degree();
    if (da != db) return da > db;
    return a.e > b.e;  // lex on exponent vectors, bigger first
  }
};

// sparse polynomial over Rational in a fixed number of variables; terms are
// kept in graded-lex order with no explicit zeros, so equal values have equal
// representations
class Poly {
 public:
  using Term = std::pair<Mono, Rational>;

  explicit Poly(int nvars = 0) : nvars_(nvars) { Mono::check_nvars(nvars); }

  static Poly constant(int nvars, const Rational& c) {
    Poly p(nvars);
    if (!c.is_zero()) p.t_.emplace_back(Mono::unit(nvars), c);
    return p;
  }

  static Poly one(int nvars) { return constant(nvars, Rational(1)); }

  static Poly var(int nvars, int i) {
    Mono m = Mono::unit(nvars);
    m.set(i, 1);
    return monomial(nvars, m, Rational(1));
  }

  static Poly monomial(int nvars, const Mono& m, const Rational& c) {
    if (m.n != nvars) throw error("monomial has wrong variable count");
    Poly p(nvars);
    if (!c.is_zero()) p.t_.emplace_back(m, c);
    return p;
  }

  int nvars() const { return nvars_; }
  bool is_zero() const { return t_.empty(); }
  const std::vector<Term>& terms() const { return t_; }

  int degree() const {  // degree of the zero polynomial reported as -1
    int d = -1;
    for (const Term& t : t_) d = std::max(d, t.first.degree());
    return d;
  }

  int degree_in(int lo, int hi) const {
    int d = t_.empty() ? -1 : 0;
    for (const Term& t : t_) d = std::max(d, t.first.degree_in(lo, hi));
    return d;
  }

  Rational coeff(const Mono& m) const {
    for (const Term& t : t_)
      if (t.first == m) return t.second;
    return Rational();
  }

  Rational constant_coeff() const { return coeff(Mono::unit(nvars_)); }

  friend Poly operator+(const Poly& a, const Poly& b) {
    a.match(b);
    Poly r(a.nvars_);
    r.t_.reserve(a.t_.size() + b.t_.size());
    GrlexDesc lt;
    std::size_t i = 0, j = 0;
    while (i < a.t_.size() || j < b.t_.size()) {
      if (j == b.t_.size() || (i < a.t_.size() && lt(a.t_[i].first, b.t_[j].first))) {
        r.t_.push_back(a.t_[i++]);
      } else if (i == a.t_.size() || lt(b.t_[j].first, a.t_[i].first)) {
        r.t_.push_back(b.t_[j++]);
      } else {
        Rational c = a.t_[i].second + b.t_[j].second;
        if (!c.is_zero()) r.t_.emplace_back(a.t_[i].first, c);
        ++i, ++j;
      }
    }
    return r;
  }

  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

  Poly operator-() const {
    Poly r(nvars_);
    r.t_.reserve(t_.size());
    for (const Term& t : t_) r.t_.emplace_back(t.first, -t.second);
    return r;
  }

  friend Poly operator*(const Poly& a, const Poly& b) {
    a.match(b);
    if (a.t_.empty() || b.t_.empty()) return Poly(a.nvars_);
    if (b.t_.size() == 1) return a.times_term(b.t_[0]);
    if (a.t_.size() == 1) return b.times_term(a.t_[0]);
    std::map<Mono, Rational, GrlexDesc> acc;
    for (const Term& x : a.t_)
      for (const Term& y : b.t_) acc[x.first.times(y.first)] += x.second * y.second;
    Poly r(a.nvars_);
    for (auto& [m, c] : acc)
      if (!c.is_zero()) r.t_.emplace_back(m, c);
    return r;
  }

  Poly scaled(const Rational& c) const {
    if (c.is_zero()) return Poly(nvars_);
    Poly r(nvars_);
    r.t_.reserve(t_.size());
    for (const Term& t : t_) r.t_.emplace_back(t.first, t.second * c);
    return r;
  }

  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  Poly diff(int var) const {
    if (var < 0 || var >= nvars_) throw error("derivative variable out of range");
    Poly r(nvars_);
    r.t_.reserve(t_.size());
    // dividing the surviving monomials by a variable preserves graded-lex order
    for (const Term& t : t_) {
      int ev = t.first[var];
      if (ev == 0) continue;
      Mono m = t.first;
      m.set(var, ev - 1);
      r.t_.emplace_back(m, t.second * Rational(ev));
    }
    return r;
  }

  Rational eval(const std::vector<Rational>& point) const {
    if (static_cast<int>(point.size()) != nvars_) throw error("evaluation point has wrong dimension");
    Rational total;
    for (const Term& t : t_) {
      Rational v = t.second;
      for (int i = 0; i < nvars_; ++i)
        for (int k = 0; k < t.first[i]; ++k) v *= point[static_cast<std::size_t>(i)];
      total += v;
    }
    return total;
  }

  Poly subst_zero(int var) const {  // set one variable to zero
    Poly r(nvars_);
    for (const Term& t : t_)
      if (t.first[var] == 0) r.t_.push_back(t);
    return r;
  }

  // coefficient of var^power: matching terms with that variable removed
  Poly coeff_of(int var, int power) const {
    Poly r(nvars_);
    for (const Term& t : t_) {
      if (t.first[var] != power) continue;
      Mono m = t.first;
      m.set(var, 0);
      r.t_.emplace_back(m, t.second);
    }
    r.sort_terms();
    return r;
  }

  // terms whose total degree over variables [lo, hi) is exactly deg
  Poly select_degree_in(int lo, int hi, int deg) const {
    Poly r(nvars_);
    for (const Term& t : t_)
      if (t.first.degree_in(lo, hi) == deg) r.t_.push_back(t);
    return r;
  }

  bool depends_on(int var) const {
    for (const Term& t : t_)
      if (t.first[var] != 0) return true;
    return false;
  }

  // same value in a ring with extra trailing variables
  Poly extended(int new_nvars) const {
    if (new_nvars < nvars_) throw error("cannot shrink variable count");
    Poly r(new_nvars);
    r.t_.reserve(t_.size());
    for (const Term& t : t_) {
      Mono m = Mono::unit(new_nvars);
      for (int i = 0; i < nvars_; ++i) m.set(i, t.first[i]);
      r.t_.emplace_back(m, t.second);
    }
    return r;
  }

  // inverse of extended(): requires independence of the dropped variables
  Poly restricted(int new_nvars) const {
    if (new_nvars > nvars_) throw error("cannot grow variable count here");
    Poly r(new_nvars);
    r.t_.reserve(t_.size());
    for (const Term& t : t_) {
      if (t.first.degree_in(new_nvars, nvars_) != 0) throw error("polynomial depends on dropped variables");
      Mono m = Mono::unit(new_nvars);
      for (int i = 0; i < new_nvars; ++i) m.set(i, t.first[i]);
      r.t_.emplace_back(m, t.second);
    }
    return r;
  }

  friend bool operator==(const Poly& a, const Poly& b) { return a.nvars_ == b.nvars_ && a.t_ == b.t_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  std::string str(const std::vector<std::string>& names = {}) const {
    if (t_.empty()) return "0";
    std::string out;
    for (std::size_t k = 0; k < t_.size(); ++k) {
      const auto& [m, c] = t_[k];
      bool neg = c.sign() < 0;
      Rational mag = c.abs();
      if (k == 0) {
        if (neg) out += "-";
      } else {
        out += neg ? " - " : " + ";
      }
      std::string vars;
      for (int i = 0; i < nvars_; ++i) {
        if (m[i] == 0) continue;
        if (!vars.empty()) vars += "*";
        vars += var_name(i, names);
        if (m[i] > 1) vars += "^" + std::to_string(m[i]);
      }
      if (vars.empty()) {
        out += mag.str();
      } else {
        if (!mag.is_one()) out += mag.str() + "*";
        out += vars;
      }
    }
    return out;
  }

  static std::string var_name(int i, const std::vector<std::string>& names) {
    if (i < static_cast<int>(names.size())) return names[static_cast<std::size_t>(i)];
    return "x" + std::to_string(i + 1);
  }

 private:
  Poly times_term(const Term& t) const {  // order-preserving single-term product
    Poly r(nvars_);
    r.t_.reserve(t_.size());
    for (const Term& x : t_) r.t_.emplace_back(x.first.times(t.first), x.second * t.second);
    return r;
  }

  void sort_terms() {
    std::sort(t_.begin(), t_.end(),
              [](const Term& a, const Term& b) { return GrlexDesc()(a.first, b.first); });
  }

  void match(const Poly& o) const {
    if (nvars_ != o.nvars_) throw error("polynomial variable counts differ");
  }

  int nvars_;
  std::vector<Term> t_;
};

}  // namespace courant
