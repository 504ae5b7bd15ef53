#pragma once

#include <deque>
#include <map>
#include <random>
#include <vector>

#include "wcs/laurent.hpp"
#include "wcs/wreath.hpp"

namespace testutil {

using namespace wcs;

inline std::mt19937_64& rng() {
  static std::mt19937_64 g(12345);
  return g;
}

inline Int uniform(Int lo, Int hi) { return std::uniform_int_distribution<Int>(lo, hi)(rng()); }

inline Vec random_vec(const AbelianGroup& G, Int span) {
  Vec v(G.dim());
  for (Int& x : v) x = uniform(-span, span);
  return G.normalize(v);
}

/// Random element with up to `terms` support points of free norm <= span.
inline WreathElement random_element(const WreathGroup& W, int terms = 4, Int span = 4) {
  std::vector<std::pair<Vec, Vec>> f;
  for (int i = uniform(0, terms); i > 0; --i) f.emplace_back(random_vec(W.acting(), span), random_vec(W.base(), span));
  return W.make(f, random_vec(W.acting(), 3));
}

inline LaurentPoly random_poly(Ring r, int terms = 4, Int span = 4) {
  LaurentPoly p = poly_zero(r);
  for (int i = uniform(0, terms); i > 0; --i) p = poly_add(p, poly_monomial(r, uniform(-5, 5), uniform(-span, span)));
  return p;
}

inline SemidirectElement random_sd(Ring r, int terms = 4, Int span = 4) { return {random_poly(r, terms, span), uniform(-3, 3)}; }

/// Word lengths of every element within radius n, by breadth-first search on
/// the Cayley graph with generators a (at 0) and the acting basis.
inline std::map<WreathElement, Int> cayley_ball(const WreathGroup& W, Int n) {
  std::vector<WreathElement> gens;
  const WreathElement a = W.make({{W.acting().zero(), W.base().gen(0)}}, W.acting().zero());
  gens.push_back(a);
  gens.push_back(W.inverse(a));
  for (std::size_t i = 0; i < W.acting().dim(); ++i) {
    gens.push_back(W.acting_element(W.acting().gen(i)));
    gens.push_back(W.inverse(gens.back()));
  }
  std::map<WreathElement, Int> dist{{W.identity(), 0}};
  std::deque<WreathElement> q{W.identity()};
  while (!q.empty()) {
    const WreathElement g = q.front();
    q.pop_front();
    if (dist[g] == n) continue;
    for (const WreathElement& s : gens) {
      const WreathElement h = W.multiply(g, s);
      if (dist.emplace(h, dist[g] + 1).second) q.push_back(h);
    }
  }
  return dist;
}

}  // namespace testutil
