#pragma once

// Integer-lattice helpers. Every norm bound here is in the 1-norm.

#include <vector>

#include "wcs/abelian.hpp"

namespace wcs {

using Matrix = std::vector<Vec>;

/// Bezout vector a with a.b = gcd(b). When gcd(b) = 1, k >= 2 and
/// max|b_i| >= 2, also max|a_i| <= max|b_i| / 2.
Vec ext_gcd_bounded(const Vec& b);

/// k-1 vectors generating ker(x -> x.b) with each 1-norm <= 2^{k-1} |b|_1.
std::vector<Vec> kernel_basis(const Vec& b);

struct UnimodularTransform {
  std::size_t k = 0;
  Matrix T;
  Vec b;
};

/// Rows: ext_gcd_bounded(b) followed by kernel_basis(b). Requires gcd(b) = 1.
UnimodularTransform unimodular_transform(const Vec& b);

Int determinant(const Matrix& M);
Vec mat_vec(const Matrix& M, const Vec& v);
Int dot(const Vec& a, const Vec& b);

/// Coefficients c with sum c_i * gens[i] = v, or empty if v is not in the
/// integer span. Gens must be linearly independent.
std::optional<Vec> solve_in_span(const std::vector<Vec>& gens, const Vec& v);

}  // namespace wcs
