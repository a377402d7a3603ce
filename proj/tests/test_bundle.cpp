#include <catch2/catch_amalgamated.hpp>

#include <utility>
#include <vector>

#include "courant/bundle.hpp"
#include "courant/error.hpp"
#include "support_bundle.hpp"

using courant::add_block_form;
using courant::add_block_mvec;
using courant::AnchoredSection;
using courant::binomial;
using courant::block_form;
using courant::block_mvec;
using courant::BundleContext;
using courant::CoDerivation;
using courant::commutator;
using courant::CoSection;
using courant::Derivation;
using courant::dual;
using courant::co_commutator;
using courant::Form;
using courant::interior;
using courant::lie_derivative;
using courant::Mask;
using courant::mask_degree;
using courant::masks_of_degree;
using courant::Multivector;
using courant::Poly;
using courant::Rational;
using courant::Rng;
using courant::valued_lie_derivative;
using courant::vector_valued_from_form;
using courant::VectorValuedForm;
using courant::wedge;
using testing_support::random_anchored;
using testing_support::random_co;
using testing_support::random_co_derivation;
using testing_support::random_derivation;
using testing_support::random_form;
using testing_support::random_mvec;
using testing_support::random_poly;
using testing_support::random_valued_form;
using testing_support::random_vf;

namespace {

Form dx(int dim, int i) { return Form::single(dim, Mask{1} << i, Poly::one(dim)); }
Multivector dd(int dim, int i) {
  return Multivector::single(dim, Mask{1} << i, Poly::one(dim));
}

// componentwise expansion of the pairing, kept separate from the library's
AnchoredSection section(const BundleContext& c, Multivector x, std::vector<Poly> eps) {
  AnchoredSection s = AnchoredSection::zero(c);
  s.X = std::move(x);
  s.eps = std::move(eps);
  return s;
}

CoSection co_section(const BundleContext& c, std::vector<Poly> e, Form theta) {
  CoSection s = CoSection::zero(c);
  s.e = std::move(e);
  s.theta = std::move(theta);
  return s;
}

Poly pairing_oracle(const AnchoredSection& nu, const CoSection& tau) {
  int n = nu.X.dim();
  Poly p(n);
  for (std::size_t a = 0; a < nu.eps.size(); ++a) p += nu.eps[a] * tau.e[a];
  for (int i = 0; i < n; ++i) p += tau.theta.coeff(Mask{1} << i) * nu.X.coeff(Mask{1} << i);
  return p;
}

Poly duality_pairing(const std::vector<Poly>& eps, const std::vector<Poly>& e, int n) {
  Poly p(n);
  for (std::size_t a = 0; a < eps.size(); ++a) p += eps[a] * e[a];
  return p;
}

}  // namespace

TEST_CASE("index masks of a fixed degree come out in lexicographic order") {
  std::vector<Mask> m42 = masks_of_degree(4, 2);
  REQUIRE(m42.size() == 6);
  CHECK(m42[0] == 0b0011u);
  CHECK(m42[1] == 0b0101u);
  CHECK(m42[2] == 0b1001u);
  CHECK(m42[3] == 0b0110u);
  CHECK(m42[4] == 0b1010u);
  CHECK(m42[5] == 0b1100u);

  for (int n = 1; n <= 7; ++n)
    for (int k = 0; k <= n; ++k) {
      std::vector<Mask> ms = masks_of_degree(n, k);
      CHECK(static_cast<long long>(ms.size()) == binomial(n, k));
      for (Mask m : ms) CHECK(mask_degree(m) == k);
    }
  CHECK(masks_of_degree(3, 5).empty());
}

TEST_CASE("contexts lay out structured fibers block by block") {
  BundleContext cd = BundleContext::wedge_powers(3, {1});
  CHECK(cd.r() == 3);
  CHECK(cd.blocks().size() == 1);

  BundleContext mixed = BundleContext::wedge_powers(3, {1, 1, 3});
  CHECK(mixed.r() == 7);
  CHECK(mixed.blocks()[0].offset == 0);
  CHECK(mixed.blocks()[1].offset == 3);
  CHECK(mixed.blocks()[2].offset == 6);

  BundleContext e7 = BundleContext::exceptional();
  CHECK(e7.n() == 7);
  CHECK(e7.r() == 49);
  CHECK(e7.blocks()[0].count() == 21);
  CHECK(e7.blocks()[1].offset == 21);
  CHECK(e7.blocks()[2].offset == 42);
  CHECK(e7.blocks()[2].legs == 7);

  // degree-empty summands collapse below dimension seven
  CHECK(BundleContext::exceptional(3).r() == 3);

  CHECK_THROWS_AS(BundleContext::generic(0, 1), courant::error);
  CHECK_THROWS_AS(BundleContext::wedge_powers(2, {5}), courant::error);
  BundleContext g = BundleContext::generic(2, 3);
  CHECK_THROWS_AS(g.expect(BundleContext::generic(2, 2)), courant::error);
}

TEST_CASE("the duality pairing expands componentwise") {
  BundleContext c = BundleContext::wedge_powers(2, {1});
  Poly zero(2), one = Poly::one(2);
  Poly x = Poly::var(2, 0), y = Poly::var(2, 1);

  // unit cross components on both sides add up
  AnchoredSection nu = section(c, dd(2, 0), {zero, one});
  CoSection tau = co_section(c, {zero, one}, dx(2, 0));
  CHECK(pairing(nu, tau) == Poly::constant(2, Rational(2)));

  // no overlap, no value
  AnchoredSection nu2 = section(c, dd(2, 0).times(x), {zero, zero});
  CoSection tau2 = co_section(c, {y, one}, Form(2, 1));
  CHECK(pairing(nu2, tau2).is_zero());

  AnchoredSection nu3 = section(c, Multivector(2, 1), {x, zero});
  CoSection tau3 = co_section(c, {y, zero}, Form(2, 1));
  CHECK(pairing(nu3, tau3) == x * y);

  Rng g = Rng::from(12, {1});
  for (int trial = 0; trial < 40; ++trial) {
    AnchoredSection a = random_anchored(g, c);
    CoSection t = random_co(g, c);
    CHECK(pairing(a, t) == pairing_oracle(a, t));
  }
}

TEST_CASE("sections form a module over functions") {
  BundleContext c = BundleContext::wedge_powers(2, {1, 2});
  Rng g = Rng::from(12, {2});
  for (int trial = 0; trial < 25; ++trial) {
    AnchoredSection a = random_anchored(g, c), b = random_anchored(g, c);
    CoSection t = random_co(g, c), u = random_co(g, c);
    Poly f = random_poly(g, 2, 2);
    CHECK(pairing(a + b, t) == pairing(a, t) + pairing(b, t));
    CHECK(pairing(a, t + u) == pairing(a, t) + pairing(a, u));
    CHECK(pairing(a.times(f), t) == pairing(a, t) * f);
    CHECK(pairing(a, t.times(f)) == pairing(a, t) * f);
    CHECK((a - b) + b == a);
    CHECK((t - u) + u == t);
    CHECK(a.scaled(Rational(-3)) == a.times(Poly::constant(2, Rational(-3))));
  }
}

TEST_CASE("block views round-trip between flat components and forms") {
  BundleContext c = BundleContext::wedge_powers(3, {1, 2});
  Rng g = Rng::from(12, {3});
  for (int trial = 0; trial < 20; ++trial) {
    Form a1 = random_form(g, 3, 1), a2 = random_form(g, 3, 2);
    std::vector<Poly> comps(static_cast<std::size_t>(c.r()), Poly(3));
    add_block_form(c, comps, 0, a1);
    add_block_form(c, comps, 1, a2);
    CHECK(block_form(c, comps, 0) == a1);
    CHECK(block_form(c, comps, 1) == a2);

    Multivector t1 = random_mvec(g, 3, 1), t2 = random_mvec(g, 3, 2);
    std::vector<Poly> mcomps(static_cast<std::size_t>(c.r()), Poly(3));
    add_block_mvec(c, mcomps, 0, t1);
    add_block_mvec(c, mcomps, 1, t2);
    CHECK(block_mvec(c, mcomps, 0) == t1);
    CHECK(block_mvec(c, mcomps, 1) == t2);
  }

  std::vector<Poly> comps(static_cast<std::size_t>(c.r()), Poly(3));
  CHECK_THROWS_AS(add_block_form(c, comps, 0, random_form(g, 3, 2)), courant::error);

  // covector legs of the exceptional top block are stored interleaved
  BundleContext e7 = BundleContext::exceptional();
  std::vector<Poly> ecomps(static_cast<std::size_t>(e7.r()), Poly(7));
  Form top = random_form(g, 7, 7, 1);
  add_block_form(e7, ecomps, 2, top, 3);
  CHECK(block_form(e7, ecomps, 2, 3) == top);
  CHECK(block_form(e7, ecomps, 2, 2).is_zero());
  CHECK(ecomps[45] == top.coeff((Mask{1} << 7) - 1));
}

TEST_CASE("derivations act through symbol plus matrix") {
  Derivation d(1, 1);
  Poly x = Poly::var(1, 0);
  d.symbol = dd(1, 0).times(x);
  d.add_entry(0, 0, Poly::constant(1, Rational(2)));
  std::vector<Poly> out = d.apply({x * x});
  REQUIRE(out.size() == 1);
  CHECK(out[0] == (x * x).scaled(Rational(4)));

  CHECK_THROWS_AS(d.add_entry(1, 0, x), courant::error);
  CHECK_THROWS_AS(d.apply({x, x}), courant::error);

  // accumulating an opposite entry clears the slot
  d.add_entry(0, 0, Poly::constant(1, Rational(-2)));
  CHECK(d.entry(0, 0).is_zero());
  CHECK(d.entries().empty());
}

TEST_CASE("derivation commutators match the component formula") {
  // a derivation commutes with itself
  BundleContext c = BundleContext::generic(2, 2);
  Rng g = Rng::from(12, {4});
  for (int trial = 0; trial < 10; ++trial) {
    Derivation d = random_derivation(g, c);
    CHECK(commutator(d, d).is_zero());
  }

  // rank one: symbol x d/dx with matrix [x] against pure matrix [1]
  Poly x = Poly::var(1, 0);
  Derivation d1(1, 1), d2(1, 1);
  d1.symbol = dd(1, 0);
  d1.add_entry(0, 0, x);
  d2.add_entry(0, 0, Poly::one(1));
  CHECK(commutator(d1, d2).is_zero());

  // the commutator is itself computable from the action on sections
  for (int trial = 0; trial < 15; ++trial) {
    Derivation a = random_derivation(g, c), b = random_derivation(g, c);
    std::vector<Poly> e = {random_poly(g, 2, 2), random_poly(g, 2, 2)};
    CHECK(commutator(a, b).apply(e) ==
          [&] {
            std::vector<Poly> lhs = a.apply(b.apply(e)), rhs = b.apply(a.apply(e));
            for (std::size_t i = 0; i < lhs.size(); ++i) lhs[i] -= rhs[i];
            return lhs;
          }());
  }

  // Jacobi identity in Leibniz form for the commutator
  for (int trial = 0; trial < 8; ++trial) {
    Derivation a = random_derivation(g, c, 1), b = random_derivation(g, c, 1),
               d = random_derivation(g, c, 1);
    Derivation lhs = commutator(a, commutator(b, d));
    Derivation rhs1 = commutator(commutator(a, b), d);
    Derivation rhs2 = commutator(b, commutator(a, d));
    CHECK((lhs - rhs1) - rhs2 == Derivation(2, 2));
  }
}

TEST_CASE("the dual derivation satisfies the defining identity") {
  BundleContext c = BundleContext::generic(2, 2);
  Rng g = Rng::from(12, {5});
  for (int trial = 0; trial < 20; ++trial) {
    Derivation d = random_derivation(g, c);
    std::vector<Poly> eps = {random_poly(g, 2, 2), random_poly(g, 2, 2)};
    std::vector<Poly> e = {random_poly(g, 2, 2), random_poly(g, 2, 2)};
    Poly lhs = duality_pairing(dual(d).apply(eps), e, 2);
    Poly rhs = courant::apply_vector_field(d.symbol, duality_pairing(eps, e, 2)) -
               duality_pairing(eps, d.apply(e), 2);
    CHECK(lhs == rhs);
    CHECK(dual(dual(d)) == d);
  }

  // dualizing is compatible with commutators
  for (int trial = 0; trial < 10; ++trial) {
    Derivation a = random_derivation(g, c), b = random_derivation(g, c);
    CHECK(dual(commutator(a, b)) == commutator(dual(a), dual(b)));
  }
}

TEST_CASE("operators on E + T*M compose blockwise") {
  BundleContext c = BundleContext::wedge_powers(2, {1});
  Rng g = Rng::from(12, {6});
  for (int trial = 0; trial < 15; ++trial) {
    CoDerivation c1 = random_co_derivation(g, c), c2 = random_co_derivation(g, c);
    CoSection tau = random_co(g, c);

    // a one-form rides along by Lie derivative only
    CoSection pure = co_section(c, {Poly(2), Poly(2)}, tau.theta);
    CoSection moved = c1.apply(pure);
    for (const Poly& p : moved.e) CHECK(p.is_zero());
    CHECK(moved.theta == lie_derivative(c1.base.symbol, tau.theta));

    // the commutator agrees with composition of actions
    CoSection lhs = co_commutator(c1, c2).apply(tau);
    CoSection rhs = c1.apply(c2.apply(tau)) - c2.apply(c1.apply(tau));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("valued forms contract and transport componentwise") {
  BundleContext c = BundleContext::wedge_powers(3, {1});
  Rng g = Rng::from(12, {7});
  for (int trial = 0; trial < 15; ++trial) {
    VectorValuedForm w = random_valued_form(g, c, 2);
    Multivector x = random_vf(g, 3);
    VectorValuedForm wx = interior(x, w);
    for (int a = 0; a < 3; ++a)
      CHECK(wx.comp[static_cast<std::size_t>(a)] ==
            interior(x, w.comp[static_cast<std::size_t>(a)]));

    // transport along a commutator equals the commutator of transports
    Derivation d1 = random_derivation(g, c, 1), d2 = random_derivation(g, c, 1);
    VectorValuedForm lhs = valued_lie_derivative(commutator(d1, d2), w);
    VectorValuedForm rhs = valued_lie_derivative(d1, valued_lie_derivative(d2, w)) -
                           valued_lie_derivative(d2, valued_lie_derivative(d1, w));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("plain forms become valued forms by contracting the last slot") {
  // beta = dx^dy: components are -dy and dx, so contracting with d/dx
  // recovers i_{d/dx} beta = dy
  BundleContext c2 = BundleContext::wedge_powers(2, {1});
  Form beta = wedge(dx(2, 0), dx(2, 1));
  VectorValuedForm w = vector_valued_from_form(c2, beta);
  CHECK(w.degree == 1);
  CHECK(w.comp[0] == -dx(2, 1));
  CHECK(w.comp[1] == dx(2, 0));

  // the last-slot convention against random data, rebuilt as a one-form
  Rng g = Rng::from(12, {8});
  BundleContext c3 = BundleContext::wedge_powers(3, {1});
  for (int trial = 0; trial < 12; ++trial) {
    Form h = random_form(g, 3, 3);
    Multivector x1 = random_vf(g, 3), x2 = random_vf(g, 3);
    VectorValuedForm v = interior(x2, interior(x1, vector_valued_from_form(c3, h)));
    Form rebuilt(3, 1);
    for (int a = 0; a < 3; ++a)
      rebuilt += Form::single(3, Mask{1} << a, v.comp[static_cast<std::size_t>(a)].coeff(0));
    CHECK(rebuilt == interior(x2, interior(x1, h)));
  }

  // the twisting three-form on R^4, pinned componentwise
  BundleContext c4 = BundleContext::wedge_powers(4, {1});
  Poly x4 = Poly::var(4, 3);
  Form h = wedge(wedge(dx(4, 0), dx(4, 1)), dx(4, 2)).times(x4);
  VectorValuedForm hw = vector_valued_from_form(c4, h);
  CHECK(hw.comp[0] == wedge(dx(4, 1), dx(4, 2)).times(x4));
  CHECK(hw.comp[3].is_zero());
  VectorValuedForm vv = interior(dd(4, 2), interior(dd(4, 1), hw));
  CHECK(vv.comp[0].coeff(0) == x4);

  CHECK_THROWS_AS(vector_valued_from_form(BundleContext::wedge_powers(3, {2}), h),
                  courant::error);
}
