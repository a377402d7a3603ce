#pragma once

// Trivialized vector bundle E = R^n x R^r over M = R^n: contexts describing
// what the fiber represents, sections of TM + E* and E + T*M, the duality
// pairing, derivations of E with their duals and commutators, and E*-valued
// forms. Everything is expressed in the global constant frame.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "courant/alt.hpp"
#include "courant/error.hpp"
#include "courant/poly.hpp"

namespace courant {

// strictly increasing k-index tuples over n indices, in lexicographic order
inline std::vector<Mask> masks_of_degree(int n, int k) {
  std::vector<Mask> out;
  if (k < 0 || k > n) return out;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.push_back(tuple_to_mask(idx));
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

inline long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long b = 1;
  for (int i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
  return b;
}

// One summand of a structured fiber. Components are indexed by a wedge mask
// and, when legs > 1, an extra covector leg (the E7 top block is a rank-one
// wedge power tensored with T*M, giving legs = n).
struct FiberBlock {
  int degree = 0;
  int offset = 0;
  int legs = 1;
  std::vector<Mask> masks;

  int count() const { return static_cast<int>(masks.size()) * legs; }
};

class BundleContext {
 public:
  enum class Kind { generic, wedge, e7 };

  static BundleContext generic(int n, int r) {
    BundleContext c;
    c.kind_ = Kind::generic;
    c.n_ = n;
    c.r_ = r;
    c.validate();
    return c;
  }

  // E = wedge^{k1} TM + ... + wedge^{kl} TM
  static BundleContext wedge_powers(int n, std::vector<int> degrees) {
    BundleContext c;
    c.kind_ = Kind::wedge;
    c.n_ = n;
    c.degrees_ = std::move(degrees);
    if (c.degrees_.empty()) throw error("wedge fiber needs at least one degree");
    int off = 0;
    for (int k : c.degrees_) {
      if (k < 0 || k > n) throw error("wedge degree out of range");
      FiberBlock b;
      b.degree = k;
      b.offset = off;
      b.masks = masks_of_degree(n, k);
      off += b.count();
      c.blocks_.push_back(std::move(b));
    }
    c.r_ = off;
    c.validate();
    return c;
  }

  // E = wedge^2 TM + wedge^5 TM + (wedge^7 TM tensor TM), the exceptional
  // generalized geometry model; degree-empty summands collapse for n < 7
  static BundleContext exceptional(int n = 7) {
    BundleContext c;
    c.kind_ = Kind::e7;
    c.n_ = n;
    int off = 0;
    for (int k : {2, 5, 7}) {
      FiberBlock b;
      b.degree = k;
      b.offset = off;
      b.legs = (k == 7) ? n : 1;
      b.masks = masks_of_degree(n, k);
      off += b.count();
      c.blocks_.push_back(std::move(b));
    }
    c.r_ = off;
    c.validate();
    return c;
  }

  Kind kind() const { return kind_; }
  int n() const { return n_; }
  int r() const { return r_; }
  const std::vector<int>& degrees() const { return degrees_; }
  const std::vector<FiberBlock>& blocks() const { return blocks_; }

  friend bool operator==(const BundleContext& a, const BundleContext& b) {
    return a.kind_ == b.kind_ && a.n_ == b.n_ && a.r_ == b.r_ && a.degrees_ == b.degrees_;
  }
  friend bool operator!=(const BundleContext& a, const BundleContext& b) { return !(a == b); }

  void expect(const BundleContext& o) const {
    if (*this != o) throw error("bundle contexts differ");
  }

 private:
  void validate() const {
    if (n_ < 1 || r_ < 1) throw error("bundle context needs n >= 1 and r >= 1");
    if (n_ + r_ > Mono::max_vars) throw error("total space exceeds the variable budget");
  }

  Kind kind_ = Kind::generic;
  int n_ = 0;
  int r_ = 0;
  std::vector<int> degrees_;
  std::vector<FiberBlock> blocks_;
};

// ---- sections ----

// nu = (X, eps) in Gamma(TM + E*)
struct AnchoredSection {
  Multivector X;
  std::vector<Poly> eps;

  static AnchoredSection zero(const BundleContext& c) {
    AnchoredSection s;
    s.X = Multivector(c.n(), 1);
    s.eps.assign(static_cast<std::size_t>(c.r()), Poly(c.n()));
    return s;
  }

  bool is_zero() const {
    if (!X.is_zero()) return false;
    for (const Poly& p : eps)
      if (!p.is_zero()) return false;
    return true;
  }

  friend AnchoredSection operator+(const AnchoredSection& a, const AnchoredSection& b) {
    if (a.eps.size() != b.eps.size()) throw error("section ranks differ");
    AnchoredSection r;
    r.X = a.X + b.X;
    for (std::size_t i = 0; i < a.eps.size(); ++i) r.eps.push_back(a.eps[i] + b.eps[i]);
    return r;
  }

  friend AnchoredSection operator-(const AnchoredSection& a, const AnchoredSection& b) {
    return a + (-b);
  }

  AnchoredSection operator-() const {
    AnchoredSection r;
    r.X = -X;
    for (const Poly& p : eps) r.eps.push_back(-p);
    return r;
  }

  AnchoredSection times(const Poly& f) const {
    AnchoredSection r;
    r.X = X.times(f);
    for (const Poly& p : eps) r.eps.push_back(p * f);
    return r;
  }

  AnchoredSection scaled(const Rational& c) const {
    AnchoredSection r;
    r.X = X.scaled(c);
    for (const Poly& p : eps) r.eps.push_back(p.scaled(c));
    return r;
  }

  friend bool operator==(const AnchoredSection& a, const AnchoredSection& b) {
    return a.X == b.X && a.eps == b.eps;
  }
  friend bool operator!=(const AnchoredSection& a, const AnchoredSection& b) {
    return !(a == b);
  }

  std::string str(const std::vector<std::string>& names = {}) const {
    std::string out = "(" + X.str(names) + ";";
    for (std::size_t i = 0; i < eps.size(); ++i)
      out += (i ? ", " : " ") + eps[i].str(names);
    return out + ")";
  }
};

// tau = (e, theta) in Gamma(E + T*M)
struct CoSection {
  std::vector<Poly> e;
  Form theta;

  static CoSection zero(const BundleContext& c) {
    CoSection s;
    s.e.assign(static_cast<std::size_t>(c.r()), Poly(c.n()));
    s.theta = Form(c.n(), 1);
    return s;
  }

  bool is_zero() const {
    if (!theta.is_zero()) return false;
    for (const Poly& p : e)
      if (!p.is_zero()) return false;
    return true;
  }

  friend CoSection operator+(const CoSection& a, const CoSection& b) {
    if (a.e.size() != b.e.size()) throw error("section ranks differ");
    CoSection r;
    for (std::size_t i = 0; i < a.e.size(); ++i) r.e.push_back(a.e[i] + b.e[i]);
    r.theta = a.theta + b.theta;
    return r;
  }

  friend CoSection operator-(const CoSection& a, const CoSection& b) { return a + (-b); }

  CoSection operator-() const {
    CoSection r;
    for (const Poly& p : e) r.e.push_back(-p);
    r.theta = -theta;
    return r;
  }

  CoSection times(const Poly& f) const {
    CoSection r;
    for (const Poly& p : e) r.e.push_back(p * f);
    r.theta = theta.times(f);
    return r;
  }

  friend bool operator==(const CoSection& a, const CoSection& b) {
    return a.e == b.e && a.theta == b.theta;
  }
  friend bool operator!=(const CoSection& a, const CoSection& b) { return !(a == b); }

  std::string str(const std::vector<std::string>& names = {}) const {
    std::string out = "(";
    for (std::size_t i = 0; i < e.size(); ++i) out += (i ? ", " : "") + e[i].str(names);
    return out + "; " + theta.str(names) + ")";
  }
};

// <(X, eps), (e, theta)> = eps(e) + theta(X)
inline Poly pairing(const AnchoredSection& nu, const CoSection& tau) {
  if (nu.eps.size() != tau.e.size()) throw error("section ranks differ");
  Poly p = pairing(tau.theta, nu.X);
  for (std::size_t a = 0; a < nu.eps.size(); ++a) p += nu.eps[a] * tau.e[a];
  return p;
}

// ---- geometric views of fiber components ----

// E*-components of one wedge block gathered into a form of that degree
inline Form block_form(const BundleContext& c, const std::vector<Poly>& comps, int block,
                       int leg = 0) {
  const FiberBlock& b = c.blocks().at(static_cast<std::size_t>(block));
  Form out(c.n(), b.degree);
  for (std::size_t i = 0; i < b.masks.size(); ++i)
    out += Form::single(c.n(), b.masks[i],
                        comps.at(static_cast<std::size_t>(b.offset) +
                                 i * static_cast<std::size_t>(b.legs) +
                                 static_cast<std::size_t>(leg)));
  return out;
}

inline void add_block_form(const BundleContext& c, std::vector<Poly>& comps, int block,
                           const Form& f, int leg = 0) {
  const FiberBlock& b = c.blocks().at(static_cast<std::size_t>(block));
  if (f.degree() != b.degree || f.dim() != c.n()) throw error("block degree mismatch");
  for (std::size_t i = 0; i < b.masks.size(); ++i) {
    Poly v = f.coeff(b.masks[i]);
    if (!v.is_zero())
      comps.at(static_cast<std::size_t>(b.offset) + i * static_cast<std::size_t>(b.legs) +
               static_cast<std::size_t>(leg)) += v;
  }
}

// E-components of one wedge block as a multivector
inline Multivector block_mvec(const BundleContext& c, const std::vector<Poly>& comps,
                              int block, int leg = 0) {
  const FiberBlock& b = c.blocks().at(static_cast<std::size_t>(block));
  Multivector out(c.n(), b.degree);
  for (std::size_t i = 0; i < b.masks.size(); ++i)
    out += Multivector::single(c.n(), b.masks[i],
                               comps.at(static_cast<std::size_t>(b.offset) +
                                        i * static_cast<std::size_t>(b.legs) +
                                        static_cast<std::size_t>(leg)));
  return out;
}

inline void add_block_mvec(const BundleContext& c, std::vector<Poly>& comps, int block,
                           const Multivector& t, int leg = 0) {
  const FiberBlock& b = c.blocks().at(static_cast<std::size_t>(block));
  if (t.degree() != b.degree || t.dim() != c.n()) throw error("block degree mismatch");
  for (std::size_t i = 0; i < b.masks.size(); ++i) {
    Poly v = t.coeff(b.masks[i]);
    if (!v.is_zero())
      comps.at(static_cast<std::size_t>(b.offset) + i * static_cast<std::size_t>(b.legs) +
               static_cast<std::size_t>(leg)) += v;
  }
}

// ---- derivations ----

// D(e)^a = X(e^a) + sum_b A[a][b] e^b in the constant frame; the matrix is
// kept sparse because structured fibers make r large while most brackets
// touch few entries
class Derivation {
 public:
  Derivation() : n_(0), r_(0) {}
  Derivation(int n, int r) : symbol(n, 1), n_(n), r_(r) {}

  Multivector symbol;

  int n() const { return n_; }
  int r() const { return r_; }
  const std::map<std::pair<int, int>, Poly>& entries() const { return mat_; }

  Poly entry(int a, int b) const {
    auto it = mat_.find({a, b});
    return it == mat_.end() ? Poly(n_) : it->second;
  }

  void add_entry(int a, int b, const Poly& p) {
    if (a < 0 || a >= r_ || b < 0 || b >= r_) throw error("matrix index out of range");
    if (p.is_zero()) return;
    auto [it, fresh] = mat_.try_emplace({a, b}, p);
    if (!fresh) {
      it->second += p;
      if (it->second.is_zero()) mat_.erase(it);
    }
  }

  std::vector<Poly> apply(const std::vector<Poly>& comps) const {
    if (static_cast<int>(comps.size()) != r_) throw error("section ranks differ");
    std::vector<Poly> out;
    out.reserve(comps.size());
    for (const Poly& p : comps) out.push_back(apply_vector_field(symbol, p));
    for (const auto& [ab, p] : mat_) {
      const Poly& src = comps[static_cast<std::size_t>(ab.second)];
      if (!src.is_zero()) out[static_cast<std::size_t>(ab.first)] += p * src;
    }
    return out;
  }

  bool is_zero() const { return symbol.is_zero() && mat_.empty(); }

  friend bool operator==(const Derivation& a, const Derivation& b) {
    return a.n_ == b.n_ && a.r_ == b.r_ && a.symbol == b.symbol && a.mat_ == b.mat_;
  }
  friend bool operator!=(const Derivation& a, const Derivation& b) { return !(a == b); }

  friend Derivation operator-(const Derivation& a, const Derivation& b) {
    if (a.n_ != b.n_ || a.r_ != b.r_) throw error("derivation shapes differ");
    Derivation r(a.n_, a.r_);
    r.symbol = a.symbol - b.symbol;
    r.mat_ = a.mat_;
    for (const auto& [ab, p] : b.mat_) r.add_entry(ab.first, ab.second, -p);
    return r;
  }

 private:
  int n_;
  int r_;
  std::map<std::pair<int, int>, Poly> mat_;
};

// [D1, D2]: symbol [X1, X2], matrix X1(A2) - X2(A1) + A1 A2 - A2 A1
inline Derivation commutator(const Derivation& d1, const Derivation& d2) {
  if (d1.n() != d2.n() || d1.r() != d2.r()) throw error("derivation shapes differ");
  Derivation r(d1.n(), d1.r());
  r.symbol = lie_bracket(d1.symbol, d2.symbol);
  for (const auto& [ab, p] : d2.entries())
    r.add_entry(ab.first, ab.second, apply_vector_field(d1.symbol, p));
  for (const auto& [ab, p] : d1.entries())
    r.add_entry(ab.first, ab.second, -apply_vector_field(d2.symbol, p));
  for (const auto& [ab1, p1] : d1.entries())
    for (const auto& [ab2, p2] : d2.entries()) {
      if (ab1.second == ab2.first) r.add_entry(ab1.first, ab2.second, p1 * p2);
      if (ab2.second == ab1.first) r.add_entry(ab2.first, ab1.second, -(p2 * p1));
    }
  return r;
}

// D* with <D* eps, e> = X<eps, e> - <eps, D e>: same symbol, matrix -A^T
inline Derivation dual(const Derivation& d) {
  Derivation r(d.n(), d.r());
  r.symbol = d.symbol;
  for (const auto& [ab, p] : d.entries()) r.add_entry(ab.second, ab.first, -p);
  return r;
}

// ---- operators on Gamma(E + T*M) ----

// The shape every anchored bracket's dual operator takes: the E-part acts by
// a derivation, the T*M part collects phi(e) + L_X theta with phi given on
// the frame by r one-forms.
struct CoDerivation {
  Derivation base;
  std::vector<Form> phi;

  static CoDerivation zero(const BundleContext& c) {
    CoDerivation d;
    d.base = Derivation(c.n(), c.r());
    d.phi.assign(static_cast<std::size_t>(c.r()), Form(c.n(), 1));
    return d;
  }

  CoSection apply(const CoSection& tau) const {
    if (tau.e.size() != phi.size()) throw error("section ranks differ");
    CoSection out;
    out.e = base.apply(tau.e);
    out.theta = lie_derivative(base.symbol, tau.theta);
    for (std::size_t a = 0; a < phi.size(); ++a)
      if (!tau.e[a].is_zero()) out.theta += phi[a].times(tau.e[a]);
    return out;
  }

  bool is_zero() const {
    if (!base.is_zero()) return false;
    for (const Form& f : phi)
      if (!f.is_zero()) return false;
    return true;
  }

  friend bool operator==(const CoDerivation& a, const CoDerivation& b) {
    return a.base == b.base && a.phi == b.phi;
  }
  friend bool operator!=(const CoDerivation& a, const CoDerivation& b) { return !(a == b); }
};

// [C1, C2] computed blockwise; the phi part of the commutator reads
// phi[b] += phi1(column b of A2) - phi2(column b of A1) + L_{X1} phi2[b]
// - L_{X2} phi1[b], matching the action on (e, 0) sections.
inline CoDerivation co_commutator(const CoDerivation& c1, const CoDerivation& c2) {
  if (c1.phi.size() != c2.phi.size()) throw error("derivation shapes differ");
  CoDerivation r;
  r.base = commutator(c1.base, c2.base);
  r.phi.reserve(c1.phi.size());
  for (std::size_t b = 0; b < c1.phi.size(); ++b)
    r.phi.push_back(lie_derivative(c1.base.symbol, c2.phi[b]) -
                    lie_derivative(c2.base.symbol, c1.phi[b]));
  for (const auto& [ab, p] : c2.base.entries())
    r.phi[static_cast<std::size_t>(ab.second)] +=
        c1.phi[static_cast<std::size_t>(ab.first)].times(p);
  for (const auto& [ab, p] : c1.base.entries())
    r.phi[static_cast<std::size_t>(ab.second)] -=
        c2.phi[static_cast<std::size_t>(ab.first)].times(p);
  return r;
}

// ---- E*-valued forms ----

// omega = sum_a omega_a tensor eps^a with each component a k-form on M
struct VectorValuedForm {
  int degree = 0;
  std::vector<Form> comp;

  static VectorValuedForm zero(const BundleContext& c, int degree) {
    VectorValuedForm w;
    w.degree = degree;
    w.comp.assign(static_cast<std::size_t>(c.r()), Form(c.n(), degree));
    return w;
  }

  bool is_zero() const {
    for (const Form& f : comp)
      if (!f.is_zero()) return false;
    return true;
  }

  friend VectorValuedForm operator+(const VectorValuedForm& a, const VectorValuedForm& b) {
    if (a.degree != b.degree || a.comp.size() != b.comp.size())
      throw error("valued form shapes differ");
    VectorValuedForm r;
    r.degree = a.degree;
    for (std::size_t i = 0; i < a.comp.size(); ++i) r.comp.push_back(a.comp[i] + b.comp[i]);
    return r;
  }

  friend VectorValuedForm operator-(const VectorValuedForm& a, const VectorValuedForm& b) {
    return a + b.scaled(Rational(-1));
  }

  VectorValuedForm scaled(const Rational& c) const {
    VectorValuedForm r;
    r.degree = degree;
    for (const Form& f : comp) r.comp.push_back(f.scaled(c));
    return r;
  }

  friend bool operator==(const VectorValuedForm& a, const VectorValuedForm& b) {
    return a.degree == b.degree && a.comp == b.comp;
  }
  friend bool operator!=(const VectorValuedForm& a, const VectorValuedForm& b) {
    return !(a == b);
  }
};

inline VectorValuedForm interior(const Multivector& x, const VectorValuedForm& w) {
  VectorValuedForm r;
  r.degree = w.degree - 1;
  if (r.degree < 0) throw error("contraction degree exceeds form degree");
  for (const Form& f : w.comp) r.comp.push_back(interior(x, f));
  return r;
}

// action of a derivation of E on E*-valued forms: Lie derivative on the form
// leg, dual action on the E* leg
inline VectorValuedForm valued_lie_derivative(const Derivation& d, const VectorValuedForm& w) {
  if (static_cast<int>(w.comp.size()) != d.r()) throw error("valued form shapes differ");
  VectorValuedForm r;
  r.degree = w.degree;
  for (const Form& f : w.comp) r.comp.push_back(lie_derivative(d.symbol, f));
  for (const auto& [ab, p] : d.entries())
    r.comp[static_cast<std::size_t>(ab.second)] -=
        w.comp[static_cast<std::size_t>(ab.first)].times(p);
  return r;
}

// View a plain (k+1)-form H as a k-form valued in E* = T*M, contracting the
// last slot: component_a(X_1..X_k) = H(X_1,..,X_k, coordinate_a).
inline VectorValuedForm vector_valued_from_form(const BundleContext& c, const Form& h) {
  if (c.r() != c.n()) throw error("plain-form view needs E* = T*M");
  if (h.degree() < 1) throw error("valued view needs degree at least 1");
  VectorValuedForm r;
  r.degree = h.degree() - 1;
  int sign = (r.degree % 2) ? -1 : 1;
  for (int a = 0; a < c.n(); ++a) {
    Multivector da = Multivector::single(c.n(), Mask{1} << a, Poly::one(c.n()));
    r.comp.push_back(interior(da, h).scaled(Rational(sign)));
  }
  return r;
}

}  // namespace courant
