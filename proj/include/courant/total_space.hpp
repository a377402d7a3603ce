#pragma once

// Calculus on the total space E = R^{n+r} of a trivial bundle over R^n.
// Base coordinates keep their indices 0..n-1 and the fiber coordinates sit
// at n..n+r-1, so scalars on E are polynomials in n+r variables and the
// 1-form frame runs dx_1..dx_n, du_1..du_r in that order.  Linear and core
// sections of TE + T*E correspond to derivation data downstairs, and the
// decompositions here recover that data exactly.

#include <bit>
#include <string>
#include <utility>
#include <vector>

#include "courant/alt.hpp"
#include "courant/bundle.hpp"
#include "courant/error.hpp"
#include "courant/poly.hpp"

namespace courant {

inline int total_vars(const BundleContext& c) { return c.n() + c.r(); }

// coordinate names used for witnesses and printing: x1..xn then u1..ur
inline std::vector<std::string> total_names(const BundleContext& c) {
  std::vector<std::string> names;
  for (int i = 0; i < c.n(); ++i) names.push_back("x" + std::to_string(i + 1));
  for (int a = 0; a < c.r(); ++a) names.push_back("u" + std::to_string(a + 1));
  return names;
}

// ---- moving scalars and forms up from the base ----

inline Poly pullback(const BundleContext& c, const Poly& f) {
  if (f.nvars() != c.n()) throw error("base scalar has the wrong variable count");
  return f.extended(total_vars(c));
}

inline Form pullback(const BundleContext& c, const Form& a) {
  if (a.dim() != c.n()) throw error("base form has the wrong dimension");
  const int nv = total_vars(c);
  Form r(nv, a.degree());
  for (const auto& [m, p] : a.terms()) r += Form::single(nv, m, p.extended(nv));
  return r;
}

// ---- sections of TE + T*E ----

struct GeneralizedSection {
  Multivector V;  // vector field on E
  Form A;         // 1-form on E

  static GeneralizedSection zero(const BundleContext& c) {
    const int nv = total_vars(c);
    return {Multivector(nv, 1), Form(nv, 1)};
  }

  friend GeneralizedSection operator+(const GeneralizedSection& a, const GeneralizedSection& b) {
    return {a.V + b.V, a.A + b.A};
  }
  friend GeneralizedSection operator-(const GeneralizedSection& a, const GeneralizedSection& b) {
    return {a.V - b.V, a.A - b.A};
  }
  friend bool operator==(const GeneralizedSection& a, const GeneralizedSection& b) {
    return a.V == b.V && a.A == b.A;
  }
  friend bool operator!=(const GeneralizedSection& a, const GeneralizedSection& b) {
    return !(a == b);
  }
};

namespace detail {

inline void check_total_shape(const BundleContext& c, const GeneralizedSection& s) {
  const int nv = total_vars(c);
  if (s.V.dim() != nv || s.V.degree() != 1 || s.A.dim() != nv || s.A.degree() != 1)
    throw error("section does not live on the total space of this context");
}

}  // namespace detail

// ---- the basic fiberwise-linear objects ----

// l_eps = sum eps_a u_a, the linear function cut out by a section of E*
inline Poly ell(const BundleContext& c, const std::vector<Poly>& eps) {
  if (static_cast<int>(eps.size()) != c.r()) throw error("section ranks differ");
  const int nv = total_vars(c);
  Poly p(nv);
  for (int a = 0; a < c.r(); ++a) p += pullback(c, eps[static_cast<std::size_t>(a)]) *
                                       Poly::var(nv, c.n() + a);
  return p;
}

inline Form d_ell(const BundleContext& c, const std::vector<Poly>& eps) {
  return exterior_d(Form::single(total_vars(c), 0, ell(c, eps)));
}

// phi~ for a bundle map E -> T*M given as the table phi[a][i] = dx_i-component
// of the image of the frame vector e_a: the core-linear 1-form sum phi[a][i] u_a dx_i
inline Form core_linear(const BundleContext& c, const std::vector<std::vector<Poly>>& phi) {
  if (static_cast<int>(phi.size()) != c.r()) throw error("section ranks differ");
  const int nv = total_vars(c);
  Form out(nv, 1);
  for (int a = 0; a < c.r(); ++a) {
    const auto& row = phi[static_cast<std::size_t>(a)];
    if (static_cast<int>(row.size()) != c.n()) throw error("bundle map has the wrong shape");
    for (int i = 0; i < c.n(); ++i)
      out += Form::single(nv, Mask{1} << i,
                          pullback(c, row[static_cast<std::size_t>(i)]) * Poly::var(nv, c.n() + a));
  }
  return out;
}

// same map handed over as r one-forms on the base
inline Form core_linear(const BundleContext& c, const std::vector<Form>& rows) {
  if (static_cast<int>(rows.size()) != c.r()) throw error("section ranks differ");
  std::vector<std::vector<Poly>> table;
  for (const Form& f : rows) {
    if (f.dim() != c.n() || f.degree() != 1) throw error("bundle map has the wrong shape");
    std::vector<Poly> row;
    for (int i = 0; i < c.n(); ++i) row.push_back(f.coeff(Mask{1} << i));
    table.push_back(std::move(row));
  }
  return core_linear(c, table);
}

// Lambda_w = sum u_a q*(w_a) for an E*-valued k-form w; for k = 0 this is l_eps
// and for k = 1 it agrees with the core-linear form of the same data
inline Form lambda(const BundleContext& c, const VectorValuedForm& w) {
  if (static_cast<int>(w.comp.size()) != c.r()) throw error("valued form shapes differ");
  const int nv = total_vars(c);
  Form out(nv, w.degree);
  for (int a = 0; a < c.r(); ++a)
    out += pullback(c, w.comp[static_cast<std::size_t>(a)]).times(Poly::var(nv, c.n() + a));
  return out;
}

// ---- core and linear sections ----

// (e, theta)^: the constant vertical field of e plus the pullback of theta
inline GeneralizedSection vertical_lift(const BundleContext& c, const CoSection& tau) {
  const int nv = total_vars(c);
  GeneralizedSection s = GeneralizedSection::zero(c);
  for (int a = 0; a < c.r(); ++a)
    s.V += Multivector::single(nv, Mask{1} << (c.n() + a),
                               pullback(c, tau.e[static_cast<std::size_t>(a)]));
  s.A = pullback(c, tau.theta);
  return s;
}

// D^ for a derivation D = (X, A): the base flow of the symbol plus the fiber
// rotated against the coefficient matrix, sum X^i @x_i - sum A[a][b] u_b @u_a.
// Characterized by D^(l_eps) = l_{D*eps} and D^(q*f) = q*(X f).
inline Multivector linear_vf(const BundleContext& c, const Derivation& d) {
  const int nv = total_vars(c);
  Multivector v(nv, 1);
  for (const auto& [m, p] : d.symbol.terms()) v += Multivector::single(nv, m, p.extended(nv));
  for (const auto& [ab, p] : d.entries())
    v -= Multivector::single(nv, Mask{1} << (c.n() + ab.first),
                             p.extended(nv) * Poly::var(nv, c.n() + ab.second));
  return v;
}

// the linear section carried by derivation data (d, eps, phi)
inline GeneralizedSection linear_section(const BundleContext& c, const Derivation& d,
                                         const std::vector<Poly>& eps,
                                         const std::vector<std::vector<Poly>>& phi) {
  return {linear_vf(c, d), d_ell(c, eps) - core_linear(c, phi)};
}

// ---- the Courant-Dorfman structure of the manifold E ----

inline GeneralizedSection courant_dorfman_total(const GeneralizedSection& a,
                                                const GeneralizedSection& b) {
  return {lie_bracket(a.V, b.V), lie_derivative(a.V, b.A) - interior(b.V, exterior_d(a.A))};
}

inline Poly pairing_total(const GeneralizedSection& a, const GeneralizedSection& b) {
  return pairing(a.A, b.V) + pairing(b.A, a.V);
}

// (V, A) -> (V, A + i_V B) for a two-form B on E
inline GeneralizedSection b_transform(const Form& b, const GeneralizedSection& s) {
  if (b.degree() != 2) throw error("b-field must be a two-form");
  return {s.V, s.A + interior(s.V, b)};
}

// ---- projection to the base and the linear/core classification ----

namespace detail {

// value along the zero section: kill every fiber variable, then read the
// result as a base polynomial
inline Poly at_zero_section(const BundleContext& c, const Poly& p) {
  Poly q = p;
  for (int a = 0; a < c.r(); ++a) q = q.subst_zero(c.n() + a);
  return q.restricted(c.n());
}

// first monomial whose fiber degree is not deg, or nullptr
inline const Mono* fiber_inhomogeneous(const Poly& p, int n, int nv, int deg) {
  for (const auto& t : p.terms())
    if (t.first.degree_in(n, nv) != deg) return &t.first;
  return nullptr;
}

inline std::string witness_str(const BundleContext& c, const Mono& m) {
  return Poly::monomial(total_vars(c), m, Rational(1)).str(total_names(c));
}

// empty when the section is linear, otherwise a printable offending monomial.
// Linear means: base components of V fiber-free, fiber components of V
// homogeneous of fiber degree exactly one, dx-coefficients of A of fiber
// degree exactly one, du-coefficients fiber-free.  The strict grading keeps
// linear and core transversal: q*theta and constant vertical fields are core,
// not linear.
inline std::string linear_defect(const BundleContext& c, const GeneralizedSection& s) {
  check_total_shape(c, s);
  const int n = c.n(), nv = total_vars(c);
  for (int i = 0; i < nv; ++i) {
    const Poly vp = s.V.coeff(Mask{1} << i);
    const Poly ap = s.A.coeff(Mask{1} << i);
    if (const Mono* m = fiber_inhomogeneous(vp, n, nv, i < n ? 0 : 1))
      return witness_str(c, *m);
    if (const Mono* m = fiber_inhomogeneous(ap, n, nv, i < n ? 1 : 0))
      return witness_str(c, *m);
  }
  return {};
}

// empty when the section is core: V purely vertical and constant along the
// fibers, A pulled back from the base
inline std::string core_defect(const BundleContext& c, const GeneralizedSection& s) {
  check_total_shape(c, s);
  const int n = c.n(), nv = total_vars(c);
  for (int i = 0; i < nv; ++i) {
    const Poly vp = s.V.coeff(Mask{1} << i);
    const Poly ap = s.A.coeff(Mask{1} << i);
    if (i < n) {
      if (!vp.is_zero()) return witness_str(c, vp.terms().front().first);
      if (const Mono* m = fiber_inhomogeneous(ap, n, nv, 0)) return witness_str(c, *m);
    } else {
      if (const Mono* m = fiber_inhomogeneous(vp, n, nv, 0)) return witness_str(c, *m);
      if (!ap.is_zero()) return witness_str(c, ap.terms().front().first);
    }
  }
  return {};
}

}  // namespace detail

inline bool is_linear(const BundleContext& c, const GeneralizedSection& s) {
  return detail::linear_defect(c, s).empty();
}

inline bool is_core(const BundleContext& c, const GeneralizedSection& s) {
  return detail::core_defect(c, s).empty();
}

// read a generalized section down to the base: the anchor of V along the zero
// section and the du-coefficients of A
inline AnchoredSection phi_E(const BundleContext& c, const GeneralizedSection& s) {
  detail::check_total_shape(c, s);
  AnchoredSection out = AnchoredSection::zero(c);
  for (int i = 0; i < c.n(); ++i)
    out.X += Multivector::single(c.n(), Mask{1} << i,
                                 detail::at_zero_section(c, s.V.coeff(Mask{1} << i)));
  for (int a = 0; a < c.r(); ++a)
    out.eps[static_cast<std::size_t>(a)] =
        detail::at_zero_section(c, s.A.coeff(Mask{1} << (c.n() + a)));
  return out;
}

struct LinearSectionDecomp {
  Derivation d;
  std::vector<Poly> eps;               // base polynomials, the E*-part
  std::vector<std::vector<Poly>> phi;  // phi[a][i]: dx_i-component of the image of e_a
};

// invert the correspondence chi = (D^, dl_eps - phi~) on a linear section
inline LinearSectionDecomp decompose_linear(const BundleContext& c, const GeneralizedSection& s) {
  if (std::string w = detail::linear_defect(c, s); !w.empty())
    throw error("not linear: " + w);
  const int n = c.n();
  LinearSectionDecomp out;
  out.d = Derivation(n, c.r());
  for (int i = 0; i < n; ++i)
    out.d.symbol += Multivector::single(n, Mask{1} << i, s.V.coeff(Mask{1} << i).restricted(n));
  for (int a = 0; a < c.r(); ++a) {
    const Poly fiber = s.V.coeff(Mask{1} << (n + a));
    for (int b = 0; b < c.r(); ++b) {
      Poly entry = -fiber.coeff_of(n + b, 1).restricted(n);
      if (!entry.is_zero()) out.d.add_entry(a, b, entry);
    }
    out.eps.push_back(s.A.coeff(Mask{1} << (n + a)).restricted(n));
  }
  // A = dl_eps - phi~ forces phi[a][i] = d_i(eps_a) - (u_a-coefficient of A_{dx_i})
  for (int a = 0; a < c.r(); ++a) {
    std::vector<Poly> row;
    for (int i = 0; i < n; ++i)
      row.push_back(out.eps[static_cast<std::size_t>(a)].diff(i) -
                    s.A.coeff(Mask{1} << i).coeff_of(n + a, 1).restricted(n));
    out.phi.push_back(std::move(row));
  }
  return out;
}

// ---- linear k-forms H = d Lambda_mu + Lambda_w ----

struct LinearKFormDecomp {
  VectorValuedForm mu;     // degree k-1
  VectorValuedForm omega;  // degree k; zero exactly when H is closed
};

namespace detail {

// empty when H is a linear k-form: at most one du factor per term, fiber-free
// coefficients next to a du, fiber degree exactly one otherwise
inline std::string linear_form_defect(const BundleContext& c, const Form& h) {
  const int n = c.n(), nv = total_vars(c);
  if (h.dim() != nv) throw error("form does not live on the total space of this context");
  const std::vector<std::string> names = total_names(c);
  for (const auto& [mask, p] : h.terms()) {
    const int kdu = std::popcount(mask >> n);
    if (kdu >= 2) return Form::single(nv, mask, Poly::one(nv)).str(names);
    if (const Mono* m = fiber_inhomogeneous(p, n, nv, kdu == 1 ? 0 : 1))
      return witness_str(c, *m);
  }
  return {};
}

}  // namespace detail

inline bool is_linear_kform(const BundleContext& c, const Form& h) {
  return detail::linear_form_defect(c, h).empty();
}

// read off the unique (mu, omega) with H = d Lambda_mu + Lambda_omega: mu_a is
// the du_a-slice of H and omega collects what subtracting d Lambda_mu leaves
inline LinearKFormDecomp decompose_linear_kform(const BundleContext& c, const Form& h) {
  if (std::string w = detail::linear_form_defect(c, h); !w.empty())
    throw error("not a linear form: " + w);
  const int n = c.n(), nv = total_vars(c);
  const int k = h.degree();
  if (k < 1) throw error("linear form decomposition needs positive degree");
  LinearKFormDecomp out;
  out.mu = VectorValuedForm::zero(c, k - 1);
  for (int a = 0; a < c.r(); ++a) {
    const Form slice = interior(Multivector::single(nv, Mask{1} << (n + a), Poly::one(nv)), h);
    Form base(n, k - 1);
    for (const auto& [mask, p] : slice.terms()) base += Form::single(n, mask, p.restricted(n));
    out.mu.comp[static_cast<std::size_t>(a)] = base;
  }
  const Form rest = h - exterior_d(lambda(c, out.mu));
  out.omega = VectorValuedForm::zero(c, k);
  for (int a = 0; a < c.r(); ++a) {
    Form base(n, k);
    for (const auto& [mask, p] : rest.terms())
      base += Form::single(n, mask, p.coeff_of(n + a, 1).restricted(n));
    out.omega.comp[static_cast<std::size_t>(a)] = base;
  }
  return out;
}

inline bool is_closed_linear(const BundleContext& c, const Form& h) {
  return decompose_linear_kform(c, h).omega.is_zero();
}

}  // namespace courant
