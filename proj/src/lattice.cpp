#include "wcs/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

#include "wcs/errors.hpp"

namespace wcs {

namespace {

using Wide = __int128;

Wide wabs(Wide x) { return x < 0 ? -x : x; }

Wide floor_div(Wide a, Wide b) {
  Wide q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

Int checked(Wide x) {
  if (x > INT64_MAX || x < INT64_MIN) throw std::overflow_error("lattice arithmetic overflow");
  return static_cast<Int>(x);
}

// Bareiss fraction-free elimination on a square matrix.
Wide det_wide(std::vector<std::vector<Wide>> a) {
  const std::size_t n = a.size();
  Wide sign = 1, prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && a[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(a[k], a[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

struct RationalCoords {
  std::vector<Wide> num;
  Wide den;
};

// Coordinates of v in the rational span of independent gens, if v lies in it.
std::optional<RationalCoords> rational_coords(const std::vector<Vec>& gens, const Vec& v) {
  const std::size_t r = gens.size(), k = v.size();
  if (r == 0) {
    if (std::all_of(v.begin(), v.end(), [](Int x) { return x == 0; })) return RationalCoords{{}, 1};
    return std::nullopt;
  }
  std::vector<std::size_t> rows;
  // Pick r coordinates with a nonzero minor; k is small wherever this runs.
  std::vector<bool> pick(k, false);
  std::fill(pick.begin(), pick.begin() + r, true);
  std::sort(pick.begin(), pick.end(), std::greater<>());
  do {
    rows.clear();
    for (std::size_t i = 0; i < k; ++i)
      if (pick[i]) rows.push_back(i);
    std::vector<std::vector<Wide>> m(r, std::vector<Wide>(r));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) m[i][j] = gens[j][rows[i]];
    Wide d = det_wide(m);
    if (d == 0) continue;
    RationalCoords rc{std::vector<Wide>(r), d};
    for (std::size_t j = 0; j < r; ++j) {
      auto mj = m;
      for (std::size_t i = 0; i < r; ++i) mj[i][j] = v[rows[i]];
      rc.num[j] = det_wide(mj);
    }
    for (std::size_t i = 0; i < k; ++i) {
      Wide lhs = 0;
      for (std::size_t j = 0; j < r; ++j) lhs += rc.num[j] * gens[j][i];
      if (lhs != rc.den * v[i]) return std::nullopt;
    }
    if (rc.den < 0) {
      rc.den = -rc.den;
      for (auto& x : rc.num) x = -x;
    }
    return rc;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  throw std::invalid_argument("rational_coords: generators are dependent");
}

struct Egcd {
  Int g, s, t;
};

Egcd egcd(Int a, Int b) {
  Int old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    Int q = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
    std::tie(old_t, t) = std::make_pair(t, old_t - q * t);
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

Int max_abs(const Vec& v) {
  Int m = 0;
  for (Int x : v) m = std::max(m, std::abs(x));
  return m;
}

bool better(const Vec& x, const Vec& y) {
  Int mx = max_abs(x), my = max_abs(y);
  if (mx != my) return mx < my;
  return norm1(x) < norm1(y);
}

// Greedy descent along the pairwise relations b_j e_i - b_i e_j.
void reduce_bezout(Vec& a, const Vec& b) {
  const std::size_t k = b.size();
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) {
        Int g = std::gcd(b[i], b[j]);
        if (g == 0) continue;
        Int ri = b[j] / g, rj = -b[i] / g;
        std::vector<Int> ts{-1, 1};
        auto centre = [&](Int ai, Int r) {
          if (r == 0) return;
          Wide q = floor_div(-ai, r);
          ts.push_back(checked(q));
          ts.push_back(checked(q + 1));
        };
        centre(a[i], ri);
        centre(a[j], rj);
        if (ri != 0 && rj != 0) {
          // Balance |a_i + t ri| against |a_j + t rj|.
          Wide den = std::abs(ri) + std::abs(rj);
          Wide q = floor_div(-(Wide)a[i] * (ri > 0 ? 1 : -1) - (Wide)a[j] * (rj > 0 ? 1 : -1), den);
          ts.push_back(checked(q));
          ts.push_back(checked(q + 1));
        }
        Vec best = a;
        for (Int t : ts) {
          Vec c = a;
          c[i] += t * ri;
          c[j] += t * rj;
          if (better(c, best)) best = std::move(c);
        }
        if (best != a) {
          a = std::move(best);
          improved = true;
        }
      }
  }
}

// Exhaustive fallback inside the half-max box; used only when the greedy
// descent stalls above the bound.
std::optional<Vec> box_search(const Vec& b, Int H) {
  const std::size_t k = b.size();
  std::size_t piv = k;
  for (std::size_t i = 0; i < k; ++i)
    if (b[i] != 0 && (piv == k || std::abs(b[i]) < std::abs(b[piv]))) piv = i;
  Wide cells = 1;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    cells *= 2 * H + 1;
    if (cells > 50'000'000) return std::nullopt;
  }
  Vec a(k, 0);
  std::vector<std::size_t> free_idx;
  for (std::size_t i = 0; i < k; ++i)
    if (i != piv) free_idx.push_back(i);
  std::optional<Vec> best;
  auto rec = [&](auto&& self, std::size_t d, Wide acc) -> void {
    if (d == free_idx.size()) {
      Wide rest = 1 - acc;
      if (rest % b[piv] != 0) return;
      Wide ap = rest / b[piv];
      if (wabs(ap) > H) return;
      a[piv] = static_cast<Int>(ap);
      if (!best || better(a, *best)) best = a;
      return;
    }
    for (Int c = -H; c <= H; ++c) {
      a[free_idx[d]] = c;
      self(self, d + 1, acc + (Wide)c * b[free_idx[d]]);
    }
    a[free_idx[d]] = 0;
  };
  rec(rec, 0, 0);
  return best;
}

}  // namespace

Int dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  Wide s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (Wide)a[i] * b[i];
  return checked(s);
}

Vec mat_vec(const Matrix& M, const Vec& v) {
  Vec r;
  r.reserve(M.size());
  for (const auto& row : M) r.push_back(dot(row, v));
  return r;
}

Int determinant(const Matrix& M) {
  std::vector<std::vector<Wide>> a(M.size());
  for (std::size_t i = 0; i < M.size(); ++i) {
    if (M[i].size() != M.size()) throw std::invalid_argument("determinant: not square");
    a[i].assign(M[i].begin(), M[i].end());
  }
  if (a.empty()) return 1;
  return checked(det_wide(std::move(a)));
}

std::optional<Vec> solve_in_span(const std::vector<Vec>& gens, const Vec& v) {
  auto rc = rational_coords(gens, v);
  if (!rc) return std::nullopt;
  Vec c;
  for (Wide n : rc->num) {
    if (n % rc->den != 0) return std::nullopt;
    c.push_back(checked(n / rc->den));
  }
  return c;
}

Vec ext_gcd_bounded(const Vec& b) {
  if (b.empty() || gcd_vector(b) == 0) throw std::invalid_argument("ext_gcd_bounded: zero vector");
  const std::size_t k = b.size();
  Vec a(k, 0);
  Int g = 0;
  for (std::size_t i = 0; i < k; ++i) {
    Egcd e = egcd(g, b[i]);
    for (std::size_t j = 0; j < i; ++j) a[j] = checked((Wide)a[j] * e.s);
    a[i] = e.t;
    g = e.g;
  }
  reduce_bezout(a, b);
  Int mb = max_abs(b);
  if (g == 1 && k >= 2 && mb >= 2 && 2 * max_abs(a) > mb) {
    if (auto alt = box_search(b, mb / 2)) a = *alt;
  }
  if (dot(a, b) != g) throw ContractViolation("ext_gcd_bounded: Bezout identity failed");
  return a;
}

std::vector<Vec> kernel_basis(const Vec& b) {
  const std::size_t k = b.size();
  if (k < 2) throw std::invalid_argument("kernel_basis: need k >= 2");
  if (gcd_vector(b) == 0) throw std::invalid_argument("kernel_basis: zero vector");
  auto unit = [k](std::size_t i) {
    Vec e(k, 0);
    e[i] = 1;
    return e;
  };
  // Invariant after processing coordinates [0, n): lam generates the kernel
  // of the restriction of x -> x.b to those coordinates.
  std::vector<Vec> lam;
  Int g = std::abs(b[0]);
  if (b[0] == 0) lam.push_back(unit(0));
  Vec bez(k, 0);  // bez . b = g on the processed block
  if (b[0] != 0) bez[0] = b[0] > 0 ? 1 : -1;
  for (std::size_t n = 1; n < k; ++n) {
    if (b[n] == 0) {
      lam.push_back(unit(n));
      continue;
    }
    if (g == 0) {
      // Earlier coordinates are all zero: the new coordinate is forced to 0.
      g = std::abs(b[n]);
      bez[n] = b[n] > 0 ? 1 : -1;
      continue;
    }
    // Kernel vectors of the extended block have coordinate n in d*Z.
    Egcd e = egcd(g, b[n]);
    Int d = g / e.g;
    Vec w(k, 0);
    Int scale = d * b[n] / g;
    for (std::size_t j = 0; j < n; ++j) w[j] = checked(-(Wide)scale * bez[j]);
    w[n] = d;
    // Companion vector (.., -b_n, .., b_p, ..) built from the
    // last nonzero earlier coordinate p.
    std::size_t p = n - 1;
    while (b[p] == 0) --p;
    Vec comp(k, 0);
    comp[p] = -b[n];
    comp[n] = b[p];
    std::vector<Vec> frame = lam;
    frame.push_back(comp);
    auto rc = rational_coords(frame, w);
    if (!rc) throw ContractViolation("kernel_basis: companion frame does not span");
    // Shift w into the half-open parallelogram spanned by lam, keeping its
    // coordinate n equal to d.
    for (std::size_t j = 0; j < lam.size(); ++j) {
      Int fl = checked(floor_div(rc->num[j], rc->den));
      for (std::size_t c = 0; c < k; ++c) w[c] = checked(w[c] - (Wide)fl * lam[j][c]);
    }
    lam.push_back(w);
    for (std::size_t j = 0; j < n; ++j) bez[j] = checked((Wide)bez[j] * e.s);
    bez[n] = e.t;
    g = e.g;
  }
  for (const auto& v : lam)
    if (dot(v, b) != 0) throw ContractViolation("kernel_basis: vector not in kernel");
  return lam;
}

UnimodularTransform unimodular_transform(const Vec& b) {
  if (b.size() < 2) throw std::invalid_argument("unimodular_transform: need k >= 2");
  if (gcd_vector(b) != 1) throw std::invalid_argument("unimodular_transform: gcd(b) != 1");
  UnimodularTransform u;
  u.k = b.size();
  u.b = b;
  u.T.push_back(ext_gcd_bounded(b));
  for (auto& v : kernel_basis(b)) u.T.push_back(std::move(v));
  Int det = determinant(u.T);
  if (det != 1 && det != -1) throw ContractViolation("unimodular_transform: |det| != 1");
  Vec e1(u.k, 0);
  e1[0] = 1;
  if (mat_vec(u.T, b) != e1) throw ContractViolation("unimodular_transform: T.b != e1");
  return u;
}

}  // namespace wcs
