#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "courant/error.hpp"
#include "courant/poly.hpp"

namespace courant {

using Mask = std::uint64_t;

// index sets of strictly increasing tuples are subsets, so a 64-bit mask is
// the canonical key for an antisymmetric slot
inline int mask_degree(Mask m) { return std::popcount(m); }

inline std::vector<int> mask_to_tuple(Mask m) {
  std::vector<int> t;
  for (int i = 0; m != 0; ++i, m >>= 1)
    if (m & 1) t.push_back(i);
  return t;
}

inline Mask tuple_to_mask(const std::vector<int>& t) {
  Mask m = 0;
  for (int i : t) {
    Mask bit = Mask{1} << i;
    if (m & bit || i < 0 || i >= 64) throw error("bad index tuple");
    m |= bit;
  }
  return m;
}

// sign of sorting dx^A ∧ dx^B into increasing order, for disjoint A and B:
// parity of the pairs (a in A, b in B) with a > b
inline int wedge_sign(Mask a, Mask b) {
  int inv = 0;
  for (Mask rest = b; rest != 0; rest &= rest - 1) {
    int bit = std::countr_zero(rest);
    inv += std::popcount(a >> (bit + 1));
  }
  return (inv & 1) ? -1 : 1;
}

// position-based sign for pulling index j out of the set m (j must be in m)
inline int removal_sign(Mask m, int j) {
  return (std::popcount(m & ((Mask{1} << j) - 1)) & 1) ? -1 : 1;
}

// Coefficient rings carry their own shape (polynomials know their variable
// count); throughout this library the frame dimension and the coefficient
// variable count coincide, so a correctly-shaped zero comes from dim.
template <class R>
struct scalar_shape {
  static R zero(int) { return R(); }
};
template <>
struct scalar_shape<Poly> {
  static Poly zero(int dim) { return Poly(dim); }
};

// Homogeneous antisymmetric tensor over the scalar ring R: a form when Co,
// a multivector otherwise. dim is the number of frame directions; degree is
// fixed per object. Terms are sorted by mask with no zero coefficients.
template <class R, bool Co>
class Alt {
 public:
  using Term = std::pair<Mask, R>;

  Alt() : dim_(0), degree_(0) {}
  Alt(int dim, int degree) : dim_(dim), degree_(degree) {
    if (dim < 0 || dim > 64 || degree < 0) throw error("bad form shape");
  }

  static Alt single(int dim, Mask m, R c) {
    Alt a(dim, mask_degree(m));
    if (m >> dim) throw error("mask exceeds frame dimension");
    if (!c.is_zero()) a.t_.emplace_back(m, std::move(c));
    return a;
  }

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  bool is_zero() const { return t_.empty(); }
  const std::vector<Term>& terms() const { return t_; }

  R coeff(Mask m) const {
    for (const Term& t : t_)
      if (t.first == m) return t.second;
    return scalar_shape<R>::zero(dim_);
  }

  friend Alt operator+(const Alt& a, const Alt& b) {
    a.match(b);
    Alt r(a.dim_, a.degree_);
    r.t_.reserve(a.t_.size() + b.t_.size());
    std::size_t i = 0, j = 0;
    while (i < a.t_.size() || j < b.t_.size()) {
      if (j == b.t_.size() || (i < a.t_.size() && a.t_[i].first < b.t_[j].first)) {
        r.t_.push_back(a.t_[i++]);
      } else if (i == a.t_.size() || b.t_[j].first < a.t_[i].first) {
        r.t_.push_back(b.t_[j++]);
      } else {
        R c = a.t_[i].second + b.t_[j].second;
        if (!c.is_zero()) r.t_.emplace_back(a.t_[i].first, std::move(c));
        ++i, ++j;
      }
    }
    return r;
  }

  friend Alt operator-(const Alt& a, const Alt& b) { return a + (-b); }

  Alt operator-() const {
    Alt r(dim_, degree_);
    r.t_.reserve(t_.size());
    for (const Term& t : t_) r.t_.emplace_back(t.first, -t.second);
    return r;
  }

  Alt& operator+=(const Alt& o) { return *this = *this + o; }
  Alt& operator-=(const Alt& o) { return *this = *this - o; }

  Alt times(const R& f) const {  // module structure over functions
    Alt r(dim_, degree_);
    for (const Term& t : t_) {
      R c = t.second * f;
      if (!c.is_zero()) r.t_.emplace_back(t.first, std::move(c));
    }
    return r;
  }

  Alt scaled(const Rational& c) const {
    Alt r(dim_, degree_);
    if (c.is_zero()) return r;
    for (const Term& t : t_) r.t_.emplace_back(t.first, t.second.scaled(c));
    return r;
  }

  friend bool operator==(const Alt& a, const Alt& b) {
    return a.dim_ == b.dim_ && a.degree_ == b.degree_ && a.t_ == b.t_;
  }
  friend bool operator!=(const Alt& a, const Alt& b) { return !(a == b); }

  // assemble from arbitrary accumulation
  static Alt from_map(int dim, int degree, std::map<Mask, R>&& acc) {
    Alt r(dim, degree);
    for (auto& [m, c] : acc)
      if (!c.is_zero()) r.t_.emplace_back(m, std::move(c));
    return r;
  }

  void match(const Alt& o) const {
    if (dim_ != o.dim_ || degree_ != o.degree_) throw error("form shapes differ");
  }

  std::string str(const std::vector<std::string>& names = {}) const {
    if (t_.empty()) return "0";
    // print in graded-lex tuple order, not numeric mask order
    std::vector<const Term*> order;
    for (const Term& t : t_) order.push_back(&t);
    std::sort(order.begin(), order.end(), [](const Term* x, const Term* y) {
      return mask_to_tuple(x->first) < mask_to_tuple(y->first);
    });
    std::string out;
    for (const Term* t : order) {
      std::string c = t->second.str(names);
      bool wrap = c.find(" + ") != std::string::npos || c.find(" - ") != std::string::npos;
      std::string basis;
      for (int i : mask_to_tuple(t->first)) {
        if (!basis.empty()) basis += "^";
        basis += (Co ? "d" : "@") + var_label(i, names);
      }
      std::string s;
      if (basis.empty()) {
        s = wrap ? "(" + c + ")" : c;
      } else if (c == "1") {
        s = basis;
      } else if (c == "-1") {
        s = "-" + basis;
      } else {
        s = (wrap ? "(" + c + ")" : c) + "*" + basis;
      }
      if (out.empty()) {
        out = s;
      } else if (s.size() > 1 && s[0] == '-') {
        out += " - " + s.substr(1);
      } else {
        out += " + " + s;
      }
    }
    return out;
  }

  static std::string var_label(int i, const std::vector<std::string>& names) {
    if (i < static_cast<int>(names.size())) return names[static_cast<std::size_t>(i)];
    return "x" + std::to_string(i + 1);
  }

 private:
  int dim_;
  int degree_;
  std::vector<Term> t_;
};

template <class R> using BasicForm = Alt<R, true>;
template <class R> using BasicMultivector = Alt<R, false>;

using Form = BasicForm<Poly>;
using Multivector = BasicMultivector<Poly>;

// ---- graded multiplication ----

template <class R, bool Co>
Alt<R, Co> wedge(const Alt<R, Co>& a, const Alt<R, Co>& b) {
  if (a.dim() != b.dim()) throw error("wedge of forms on different spaces");
  std::map<Mask, R> acc;
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      if (ma & mb) continue;
      R c = ca * cb;
      if (wedge_sign(ma, mb) < 0) c = -c;
      auto it = acc.find(ma | mb);
      if (it == acc.end()) acc.emplace(ma | mb, std::move(c));
      else it->second += c;
    }
  return Alt<R, Co>::from_map(a.dim(), a.degree() + b.degree(), std::move(acc));
}

// ---- exterior derivative ----

template <class R>
BasicForm<R> exterior_d(const BasicForm<R>& a) {
  std::map<Mask, R> acc;
  for (const auto& [m, c] : a.terms()) {
    for (int v = 0; v < a.dim(); ++v) {
      Mask bit = Mask{1} << v;
      if (m & bit) continue;
      R dc = c.diff(v);
      if (dc.is_zero()) continue;
      if (wedge_sign(bit, m) < 0) dc = -dc;
      auto it = acc.find(m | bit);
      if (it == acc.end()) acc.emplace(m | bit, std::move(dc));
      else it->second += dc;
    }
  }
  return BasicForm<R>::from_map(a.dim(), a.degree() + 1, std::move(acc));
}

// ---- contractions ----

// interior product with a vector field (degree-1 multivector)
template <class R>
BasicForm<R> interior(const BasicMultivector<R>& x, const BasicForm<R>& a) {
  if (x.degree() != 1) throw error("interior product needs a vector field");
  if (x.dim() != a.dim()) throw error("interior product on different spaces");
  if (a.degree() == 0) return BasicForm<R>(a.dim(), 0);
  std::map<Mask, R> acc;
  for (const auto& [mx, f] : x.terms()) {
    int j = std::countr_zero(mx);
    for (const auto& [m, c] : a.terms()) {
      if (!(m & mx)) continue;
      R v = f * c;
      if (removal_sign(m, j) < 0) v = -v;
      auto it = acc.find(m & ~mx);
      if (it == acc.end()) acc.emplace(m & ~mx, std::move(v));
      else it->second += v;
    }
  }
  return BasicForm<R>::from_map(a.dim(), a.degree() - 1, std::move(acc));
}

// full contraction of equal degrees with the determinant pairing
template <class R>
R pairing(const BasicForm<R>& a, const BasicMultivector<R>& t) {
  if (a.dim() != t.dim() || a.degree() != t.degree()) throw error("pairing shape mismatch");
  R total = scalar_shape<R>::zero(a.dim());
  for (const auto& [m, c] : a.terms())
    for (const auto& [mt, ct] : t.terms())
      if (m == mt) total += c * ct;
  return total;
}

// T ⌐ a for deg T <= deg a: iterated interior product with the leftmost
// wedge factor applied first; equivalently <T ⌐ a, S> = <a, T ∧ S> for all S
template <class R>
BasicForm<R> multi_contract(const BasicMultivector<R>& t, const BasicForm<R>& a) {
  if (t.dim() != a.dim()) throw error("contraction on different spaces");
  if (t.degree() > a.degree()) throw error("contraction degree exceeds form degree");
  std::map<Mask, R> acc;
  for (const auto& [mt, ct] : t.terms())
    for (const auto& [ma, ca] : a.terms()) {
      if ((mt & ma) != mt) continue;
      R v = ct * ca;
      if (wedge_sign(mt, ma & ~mt) < 0) v = -v;
      auto it = acc.find(ma & ~mt);
      if (it == acc.end()) acc.emplace(ma & ~mt, std::move(v));
      else it->second += v;
    }
  return BasicForm<R>::from_map(a.dim(), a.degree() - t.degree(), std::move(acc));
}

// a ⌐ T for deg a <= deg T: the mirror contraction eating the leading slots
// of the multivector, so <b, contract_form(a, T)> = <a ∧ b, T> for every b
template <class R>
BasicMultivector<R> contract_form(const BasicForm<R>& a, const BasicMultivector<R>& t) {
  if (t.dim() != a.dim()) throw error("contraction on different spaces");
  if (a.degree() > t.degree()) throw error("contraction degree exceeds multivector degree");
  std::map<Mask, R> acc;
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mt, ct] : t.terms()) {
      if ((ma & mt) != ma) continue;
      R v = ca * ct;
      if (wedge_sign(ma, mt & ~ma) < 0) v = -v;
      auto it = acc.find(mt & ~ma);
      if (it == acc.end()) acc.emplace(mt & ~ma, std::move(v));
      else it->second += v;
    }
  return BasicMultivector<R>::from_map(t.dim(), t.degree() - a.degree(), std::move(acc));
}

// ---- Lie calculus ----

// directional derivative of a function along a vector field
template <class R>
R apply_vector_field(const BasicMultivector<R>& x, const R& f) {
  if (x.degree() != 1) throw error("directional derivative needs a vector field");
  R r = scalar_shape<R>::zero(x.dim());
  for (const auto& [m, c] : x.terms()) r += c * f.diff(std::countr_zero(m));
  return r;
}

template <class R>
BasicMultivector<R> lie_bracket(const BasicMultivector<R>& x, const BasicMultivector<R>& y) {
  if (x.degree() != 1 || y.degree() != 1) throw error("lie bracket needs vector fields");
  if (x.dim() != y.dim()) throw error("lie bracket on different spaces");
  std::map<Mask, R> acc;
  auto put = [&acc](Mask m, R v) {
    if (v.is_zero()) return;
    auto it = acc.find(m);
    if (it == acc.end()) acc.emplace(m, std::move(v));
    else it->second += v;
  };
  for (const auto& [mx, f] : x.terms()) {
    int i = std::countr_zero(mx);
    for (const auto& [my, g] : y.terms()) {
      int j = std::countr_zero(my);
      put(my, f * g.diff(i));   // X(Y^j) along ∂_j
      put(mx, -(g * f.diff(j)));  // -Y(X^i) along ∂_i
    }
  }
  return BasicMultivector<R>::from_map(x.dim(), 1, std::move(acc));
}

// Cartan formula; on forms this is the definition of the Lie derivative.
// On functions only the first term exists.
template <class R>
BasicForm<R> lie_derivative(const BasicMultivector<R>& x, const BasicForm<R>& a) {
  BasicForm<R> r = interior(x, exterior_d(a));
  if (a.degree() > 0) r += exterior_d(interior(x, a));
  return r;
}

// extension of [X, ·] to multivectors as a degree-zero derivation of the
// wedge: L_X(c ∂_M) = X(c) ∂_M + c Σ_{j∈M} ∂_M with ∂_j replaced by [X,∂_j]
template <class R>
BasicMultivector<R> lie_derivative(const BasicMultivector<R>& x, const BasicMultivector<R>& t) {
  if (x.degree() != 1) throw error("lie derivative needs a vector field");
  if (x.dim() != t.dim()) throw error("lie derivative on different spaces");
  std::map<Mask, R> acc;
  auto put = [&acc](Mask m, R v) {
    if (v.is_zero()) return;
    auto it = acc.find(m);
    if (it == acc.end()) acc.emplace(m, std::move(v));
    else it->second += v;
  };
  for (const auto& [mt, c] : t.terms()) {
    for (const auto& [mx, f] : x.terms()) {
      int i = std::countr_zero(mx);
      put(mt, f * c.diff(i));
      // [f ∂_i, ∂_j] = -(∂_j f) ∂_i, slotted back in place of ∂_j
      for (Mask rest = mt; rest != 0; rest &= rest - 1) {
        int j = std::countr_zero(rest);
        R df = f.diff(j);
        if (df.is_zero()) continue;
        if (i == j) {
          put(mt, -(df * c));
          continue;
        }
        Mask others = mt & ~(Mask{1} << j);
        if (others & (Mask{1} << i)) continue;  // repeated factor dies
        int sign = removal_sign(mt, j) * wedge_sign(Mask{1} << i, others);
        R v = df * c;
        if (sign > 0) v = -v;  // overall minus from the bracket with ∂_j
        put(others | (Mask{1} << i), std::move(v));
      }
    }
  }
  return BasicMultivector<R>::from_map(t.dim(), t.degree(), std::move(acc));
}

}  // namespace courant
