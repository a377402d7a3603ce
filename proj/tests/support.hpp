#pragma once

// Shared random generators for the test suites. Everything draws through the
// counter-based Rng so any single check can be replayed from its seed path.

#include <vector>

#include "courant/alt.hpp"
#include "courant/poly.hpp"
#include "courant/prng.hpp"

namespace testing_support {

using courant::Form;
using courant::Mask;
using courant::Mono;
using courant::Multivector;
using courant::Poly;
using courant::Rational;
using courant::Rng;

inline Poly random_poly(Rng& g, int nvars, int max_deg) {
  Poly p(nvars);
  int nterms = static_cast<int>(g.range(1, 3));
  for (int t = 0; t < nterms; ++t) {
    Mono m = Mono::unit(nvars);
    int budget = static_cast<int>(g.range(0, max_deg));
    for (int d = 0; d < budget; ++d) {
      int v = static_cast<int>(g.range(0, nvars - 1));
      m.set(v, m[v] + 1);
    }
    long long c = g.range(1, 2);
    if (g.chance(1, 2)) c = -c;
    p += Poly::monomial(nvars, m, Rational(c));
  }
  return p;
}

// iterate over all strictly increasing index tuples of the given size
inline std::vector<Mask> all_masks(int dim, int degree) {
  std::vector<Mask> out;
  for (Mask m = 0; m < (Mask{1} << dim); ++m)
    if (courant::mask_degree(m) == degree) out.push_back(m);
  return out;
}

template <bool Co>
courant::Alt<Poly, Co> random_alt(Rng& g, int dim, int degree, int max_deg) {
  courant::Alt<Poly, Co> a(dim, degree);
  for (Mask m : all_masks(dim, degree))
    if (g.chance(1, 2))
      a += courant::Alt<Poly, Co>::single(dim, m, random_poly(g, dim, max_deg));
  return a;
}

inline Form random_form(Rng& g, int dim, int degree, int max_deg = 2) {
  return random_alt<true>(g, dim, degree, max_deg);
}

inline Multivector random_mvec(Rng& g, int dim, int degree, int max_deg = 2) {
  return random_alt<false>(g, dim, degree, max_deg);
}

inline Multivector random_vf(Rng& g, int dim, int max_deg = 2) {
  return random_mvec(g, dim, 1, max_deg);
}

}  // namespace testing_support
