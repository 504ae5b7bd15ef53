#include "wcs/laurent.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "wcs/errors.hpp"

namespace wcs {

namespace {

Int checked_add(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) throw BudgetExceeded("integer overflow in polynomial arithmetic");
  return r;
}

Int checked_mul(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) throw BudgetExceeded("integer overflow in polynomial arithmetic");
  return r;
}

Int norm_coeff(Ring r, Int c) { return r == 0 ? c : floor_mod(c, r); }

Int inv_mod(Int a, Int p) {
  Int g = p, x = 0, y = 1, aa = floor_mod(a, p);
  // invariant: x*a = g and y*a = aa (mod p)
  while (aa != 0) {
    Int q = g / aa;
    std::tie(g, aa) = std::make_pair(aa, g - q * aa);
    std::tie(x, y) = std::make_pair(y, x - q * y);
  }
  if (g != 1) throw std::invalid_argument("not invertible mod p");
  return floor_mod(x, p);
}

void add_term(LaurentPoly& a, Int e, Int c) {
  auto it = a.coeffs.find(e);
  Int v = norm_coeff(a.ring, it == a.coeffs.end() ? c : checked_add(it->second, c));
  if (v == 0) {
    if (it != a.coeffs.end()) a.coeffs.erase(it);
  } else if (it == a.coeffs.end()) {
    a.coeffs.emplace(e, v);
  } else {
    it->second = v;
  }
}

void require_same_ring(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.ring != b.ring) throw std::invalid_argument("polynomials over different rings");
}

/// (x^{k a} - 1) / (x^a - 1), a != 0.
LaurentPoly geometric(Ring r, Int a, Int k) {
  LaurentPoly g = poly_zero(r);
  if (k >= 0) {
    for (Int i = 0; i < k; ++i) add_term(g, i * a, 1);
  } else {
    for (Int j = 1; j <= -k; ++j) add_term(g, -j * a, -1);
  }
  return g;
}

/// Exact quotient of D by x^e - 1 (e > 0); throws when not divisible.
LaurentPoly divide_by_x_pow_minus_one(LaurentPoly D, Int e) {
  LaurentPoly Q = poly_zero(D.ring);
  if (D.is_zero()) return Q;
  const Int lo = D.min_exp();
  while (!D.is_zero()) {
    auto [k, c] = *D.coeffs.rbegin();
    if (k - e < lo) throw ContractViolation("inexact division by x^e - 1");
    add_term(Q, k - e, c);
    add_term(D, k, -c);
    add_term(D, k - e, c);
  }
  return Q;
}

/// Coefficients of P folded into R[x]/(x^n - 1).
Vec fold(const LaurentPoly& P, Int n) {
  Vec v(n, 0);
  for (auto [e, c] : P.coeffs) {
    Int& slot = v[floor_mod(e, n)];
    slot = norm_coeff(P.ring, checked_add(slot, c));
  }
  return v;
}

Vec rotate(const Vec& v, Int l) {
  const Int n = static_cast<Int>(v.size());
  Vec out(n);
  for (Int i = 0; i < n; ++i) out[floor_mod(i + l, n)] = v[i];
  return out;
}

LaurentPoly from_vec(Ring r, const Vec& v) {
  LaurentPoly P = poly_zero(r);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) add_term(P, static_cast<Int>(i), v[i]);
  return P;
}

// ---------- dense helpers over F_p ----------

Dense dense_sub_fp(Dense a, const Dense& b, Int p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = floor_mod(a[i] - b[i], p);
  return dense_trim(std::move(a));
}

Dense dense_mul_mod_fp(const Dense& a, const Dense& b, const Dense& m, Int p) {
  if (a.empty() || b.empty()) return {};
  Dense c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
  return dense_mod(c, m, p);
}

Dense make_monic(Dense a, Int p) {
  a = dense_trim(std::move(a));
  if (a.empty()) return a;
  Int inv = inv_mod(a.back(), p);
  for (Int& c : a) c = c * inv % p;
  return a;
}

/// Monic polynomials of exact degree d over F_p, in lexicographic order of
/// their low coefficients.
std::vector<Dense> monic_of_degree(Int p, Int d) {
  std::vector<Dense> out;
  Dense cur(d + 1, 0);
  cur[d] = 1;
  while (true) {
    out.push_back(cur);
    Int i = 0;
    while (i < d && cur[i] == p - 1) cur[i++] = 0;
    if (i == d) break;
    ++cur[i];
  }
  return out;
}

// ---------- integer lattices in Z^T ----------

Vec sub_multiple(const Vec& a, Int q, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = checked_add(a[i], -checked_mul(q, b[i]));
  return r;
}

Int floor_div(Int a, Int b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

/// Upper-triangular Hermite normal form of a full-rank lattice, pivots
/// positive and entries above each pivot in [0, pivot). When D > 0 the
/// lattice must contain D Z^T; entries are then kept below D.
std::vector<Vec> hnf_full(std::vector<Vec> rows, std::size_t T, Int D = 0) {
  if (D > 0) {
    for (Vec& r : rows)
      for (Int& c : r) c = floor_mod(c, D);
    for (std::size_t i = 0; i < T; ++i) {
      Vec e(T, 0);
      e[i] = D;
      rows.push_back(std::move(e));
    }
  }
  // Rows D e_j stay untouched until column j, so reducing columns > col mod D
  // never changes the lattice.
  auto reduce_tail = [&](Vec& r, std::size_t col) {
    if (D > 0)
      for (std::size_t k = col + 1; k < T; ++k) r[k] = floor_mod(r[k], D);
  };
  std::vector<Vec> out;
  for (std::size_t col = 0; col < T; ++col) {
    std::size_t piv = 0;
    while (true) {
      bool found = false;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        if (!found || std::llabs(rows[i][col]) < std::llabs(rows[piv][col])) piv = i;
        found = true;
      }
      if (!found) throw std::invalid_argument("lattice is not of full rank");
      bool clean = true;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i == piv || rows[i][col] == 0) continue;
        rows[i] = sub_multiple(rows[i], rows[i][col] / rows[piv][col], rows[piv]);
        reduce_tail(rows[i], col);
        if (rows[i][col] != 0) clean = false;
      }
      if (clean) break;
    }
    Vec p = rows[piv];
    if (p[col] < 0)
      for (Int& c : p) c = -c;
    reduce_tail(p, col);
    rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(piv));
    out.push_back(std::move(p));
  }
  // D e_k lies in the span of rows >= k, so row i may also drop multiples of
  // D in columns > i.
  for (std::size_t i = T; i-- > 0;) {
    reduce_tail(out[i], i);
    for (std::size_t j = i + 1; j < T; ++j) {
      out[i] = sub_multiple(out[i], floor_div(out[i][j], out[j][j]), out[j]);
      reduce_tail(out[i], j);
    }
  }
  return out;
}

/// Coordinates of v in the HNF basis, or empty when v is not in the lattice.
std::optional<Vec> hnf_coords(const std::vector<Vec>& H, Vec v) {
  Vec c(H.size(), 0);
  for (std::size_t j = 0; j < H.size(); ++j) {
    if (v[j] % H[j][j] != 0) return std::nullopt;
    c[j] = v[j] / H[j][j];
    v = sub_multiple(v, c[j], H[j]);
  }
  return c;
}

Vec hnf_residue(const std::vector<Vec>& H, Vec v) {
  for (std::size_t j = 0; j < H.size(); ++j) v = sub_multiple(v, floor_div(v[j], H[j][j]), H[j]);
  return v;
}

std::vector<Vec> lattice_with_shifts(const std::vector<Vec>& gens, std::size_t T) {
  std::vector<Vec> rows;
  for (const Vec& g : gens)
    for (std::size_t s = 0; s < T; ++s) rows.push_back(rotate(g, static_cast<Int>(s)));
  return rows;
}

std::uint64_t hnf_volume(const std::vector<Vec>& H) {
  std::uint64_t v = 1;
  for (std::size_t j = 0; j < H.size(); ++j) {
    if (__builtin_mul_overflow(v, static_cast<std::uint64_t>(H[j][j]), &v))
      throw BudgetExceeded("quotient too large");
  }
  return v;
}

Int lattice_period(const std::vector<Vec>& H) {
  const Int T = static_cast<Int>(H.size());
  for (Int d = 1; d < T; ++d) {
    if (T % d != 0) continue;
    Vec e(T, 0);
    e[d] += 1;
    e[0] -= 1;
    if (hnf_coords(H, e)) return d;
  }
  return T;
}

Int lattice_characteristic(const std::vector<Vec>& H) {
  const std::uint64_t vol = hnf_volume(H);
  for (std::uint64_t d = 1; d <= vol; ++d) {
    Vec e(H.size(), 0);
    e[0] = static_cast<Int>(d);
    if (hnf_coords(H, e)) return static_cast<Int>(d);
  }
  throw ContractViolation("characteristic exceeds lattice volume");
}

/// Basis of {u : M u = 0} over F_p.
std::vector<Vec> nullspace_mod_p(std::vector<Vec> M, std::size_t n, Int p) {
  std::vector<int> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < M.size(); ++c) {
    std::size_t sel = r;
    while (sel < M.size() && M[sel][c] % p == 0) ++sel;
    if (sel == M.size()) continue;
    std::swap(M[r], M[sel]);
    Int inv = inv_mod(M[r][c], p);
    for (Int& x : M[r]) x = floor_mod(x * inv, p);
    for (std::size_t i = 0; i < M.size(); ++i) {
      if (i == r || M[i][c] == 0) continue;
      Int f = M[i][c];
      for (std::size_t k = 0; k < n; ++k) M[i][k] = floor_mod(M[i][k] - f * M[r][k], p);
    }
    pivot_col.push_back(static_cast<int>(c));
    ++r;
  }
  std::vector<bool> is_pivot(n, false);
  for (int c : pivot_col) is_pivot[c] = true;
  std::vector<Vec> basis;
  for (std::size_t fc = 0; fc < n; ++fc) {
    if (is_pivot[fc]) continue;
    Vec u(n, 0);
    u[fc] = 1;
    for (std::size_t i = 0; i < pivot_col.size(); ++i) u[pivot_col[i]] = floor_mod(-M[i][fc], p);
    basis.push_back(std::move(u));
  }
  return basis;
}

std::vector<Vec> mat_mul_mod(const std::vector<Vec>& A, const std::vector<Vec>& B, Int p) {
  const std::size_t n = A.size();
  std::vector<Vec> C(n, Vec(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (A[i][k] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) C[i][j] = (C[i][j] + A[i][k] * B[k][j]) % p;
    }
  return C;
}

/// phi(C) mod p by Horner's rule.
std::vector<Vec> poly_of_matrix(const Dense& phi, const std::vector<Vec>& C, Int p) {
  const std::size_t n = C.size();
  std::vector<Vec> R(n, Vec(n, 0));
  for (std::size_t k = phi.size(); k-- > 0;) {
    R = mat_mul_mod(R, C, p);
    for (std::size_t i = 0; i < n; ++i) R[i][i] = floor_mod(R[i][i] + phi[k], p);
  }
  return R;
}

Vec mat_vec_mod(const std::vector<Vec>& C, const Vec& u, Int p) {
  Vec out(u.size(), 0);
  for (std::size_t i = 0; i < C.size(); ++i) {
    Int s = 0;
    for (std::size_t j = 0; j < u.size(); ++j) s = (s + C[i][j] * u[j]) % p;
    out[i] = s;
  }
  return out;
}

std::vector<Int> primes_up_to(std::uint64_t n) {
  std::vector<Int> ps;
  for (Int q = 2; static_cast<std::uint64_t>(q) <= n; ++q)
    if (is_prime(q)) ps.push_back(q);
  return ps;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\n\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\n\r");
  return s.substr(a, b - a + 1);
}

bool split_less(const SplitSubgroup& a, const SplitSubgroup& b) {
  if (a.index() != b.index()) return a.index() < b.index();
  if (a.t != b.t) return a.t < b.t;
  if (a.gen.size() != b.gen.size()) return a.gen.size() < b.gen.size();
  if (a.gen != b.gen) return a.gen < b.gen;
  if (a.period != b.period) return a.period < b.period;
  return a.hnf < b.hnf;
}

}  // namespace

// ---------- Laurent polynomials ----------

Int LaurentPoly::coeff(Int e) const {
  auto it = coeffs.find(e);
  return it == coeffs.end() ? 0 : it->second;
}

LaurentPoly poly_zero(Ring r) {
  if (r != 0 && !is_prime(r)) throw std::invalid_argument("ring must be Z or F_p for prime p");
  return LaurentPoly{r, {}};
}

LaurentPoly poly_monomial(Ring r, Int c, Int e) {
  LaurentPoly p = poly_zero(r);
  add_term(p, e, c);
  return p;
}

LaurentPoly x_pow_minus_one(Ring r, Int m) {
  LaurentPoly p = poly_monomial(r, 1, m);
  add_term(p, 0, -1);
  return p;
}

LaurentPoly poly_add(const LaurentPoly& a, const LaurentPoly& b) {
  require_same_ring(a, b);
  LaurentPoly r = a;
  for (auto [e, c] : b.coeffs) add_term(r, e, c);
  return r;
}

LaurentPoly poly_neg(const LaurentPoly& a) { return poly_scale(a, -1); }

LaurentPoly poly_sub(const LaurentPoly& a, const LaurentPoly& b) { return poly_add(a, poly_neg(b)); }

LaurentPoly poly_scale(const LaurentPoly& a, Int c) {
  LaurentPoly r = poly_zero(a.ring);
  for (auto [e, v] : a.coeffs) add_term(r, e, checked_mul(v, c));
  return r;
}

LaurentPoly poly_mul(const LaurentPoly& a, const LaurentPoly& b) {
  require_same_ring(a, b);
  LaurentPoly r = poly_zero(a.ring);
  for (auto [e1, c1] : a.coeffs)
    for (auto [e2, c2] : b.coeffs) add_term(r, checked_add(e1, e2), checked_mul(c1, c2));
  return r;
}

LaurentPoly poly_shift(const LaurentPoly& a, Int m) {
  LaurentPoly r = poly_zero(a.ring);
  for (auto [e, c] : a.coeffs) r.coeffs.emplace(checked_add(e, m), c);
  return r;
}

std::string to_string(const LaurentPoly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) {
    auto [e, c] = *it;
    Int mag = c < 0 ? -c : c;
    if (first) {
      if (c < 0) os << '-';
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (e == 0) {
      os << mag;
      continue;
    }
    if (mag != 1) os << mag << '*';
    os << 'x';
    if (e != 1) os << '^' << e;
  }
  return os.str();
}

LaurentPoly parse_poly(const std::string& text, Ring r) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) throw ParseError("empty polynomial");
  LaurentPoly P = poly_zero(r);
  std::size_t i = 0;
  auto read_int = [&](Int& out) {
    std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (start == i) return false;
    try {
      out = std::stoll(s.substr(start, i - start));
    } catch (const std::exception&) {
      throw ParseError("coefficient out of range in '" + text + "'");
    }
    return true;
  };
  bool first = true;
  while (i < s.size()) {
    Int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (!first) {
      throw ParseError("expected '+' or '-' in '" + text + "'");
    }
    first = false;
    Int coef = 1;
    bool has_coef = read_int(coef);
    if (has_coef && i < s.size() && s[i] == '*') ++i;
    Int e = 0;
    if (i < s.size() && s[i] == 'x') {
      ++i;
      e = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        bool paren = i < s.size() && s[i] == '(';
        if (paren) ++i;
        Int esign = 1;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) esign = s[i++] == '-' ? -1 : 1;
        if (!read_int(e)) throw ParseError("missing exponent in '" + text + "'");
        e *= esign;
        if (paren) {
          if (i >= s.size() || s[i] != ')') throw ParseError("unbalanced parenthesis in '" + text + "'");
          ++i;
        }
      }
    } else if (!has_coef) {
      throw ParseError("malformed term in '" + text + "'");
    }
    add_term(P, e, checked_mul(sign, coef));
  }
  return P;
}

std::string ring_name(Ring r) { return r == 0 ? "Z" : "F" + std::to_string(r); }

Ring parse_ring(const std::string& tag) {
  std::string t = trim(tag);
  if (!t.empty()) t[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(t[0])));
  if (t == "Z") return 0;
  std::string digits;
  if (t.size() > 1 && t[0] == 'F') digits = t.substr(1);
  if (t.rfind("Z/", 0) == 0) digits = t.substr(2);
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit))
    throw ParseError("unknown ring '" + tag + "'");
  Int p = std::stoll(digits);
  if (!is_prime(p)) throw ParseError("ring order must be prime: '" + tag + "'");
  return p;
}

// ---------- semidirect products ----------

SemidirectElement sd_multiply(const SemidirectElement& a, const SemidirectElement& b) {
  return {poly_add(a.P, poly_shift(b.P, a.m)), checked_add(a.m, b.m)};
}

SemidirectElement sd_inverse(const SemidirectElement& a) { return {poly_neg(poly_shift(a.P, -a.m)), -a.m}; }

SemidirectElement sd_conjugate(const SemidirectElement& z, const SemidirectElement& g) {
  return sd_multiply(sd_multiply(z, g), sd_inverse(z));
}

std::string to_string(const SemidirectElement& g) { return "(" + to_string(g.P) + ", " + std::to_string(g.m) + ")"; }

SemidirectElement parse_semidirect(const std::string& text, Ring r) {
  std::string s = trim(text);
  if (s.size() < 2 || s.front() != '(' || s.back() != ')')
    throw ParseError("expected '(P, m)', got '" + text + "'");
  s = s.substr(1, s.size() - 2);
  std::size_t comma = s.rfind(',');
  if (comma == std::string::npos) throw ParseError("expected '(P, m)', got '" + text + "'");
  std::string ms = trim(s.substr(comma + 1));
  std::size_t used = 0;
  Int m = 0;
  try {
    m = std::stoll(ms, &used);
  } catch (const std::exception&) {
    throw ParseError("bad exponent in '" + text + "'");
  }
  if (used != ms.size()) throw ParseError("bad exponent in '" + text + "'");
  return {parse_poly(s.substr(0, comma), r), m};
}

Ring wreath_ring(const WreathGroup& W) {
  const AbelianGroup& A = W.base();
  const AbelianGroup& B = W.acting();
  if (!(B.free_rank() == 1 && B.torsion().empty()))
    throw std::invalid_argument("Laurent model needs acting group Z, got " + B.to_string());
  if (A.free_rank() == 1 && A.torsion().empty()) return 0;
  if (A.free_rank() == 0 && A.torsion().size() == 1 && is_prime(A.torsion()[0])) return A.torsion()[0];
  throw std::invalid_argument("Laurent model needs base group Z or Z/p, got " + A.to_string());
}

WreathGroup laurent_wreath_group(Ring r) {
  if (r == 0) return WreathGroup(AbelianGroup(1), AbelianGroup(1));
  return WreathGroup(AbelianGroup(0, {r}), AbelianGroup(1));
}

SemidirectElement from_wreath(const WreathGroup& W, const WreathElement& g) {
  Ring r = wreath_ring(W);
  W.check(g);
  LaurentPoly P = poly_zero(r);
  for (const auto& [k, v] : g.f) add_term(P, k[0], v[0]);
  return {P, g.b[0]};
}

WreathElement to_wreath(const WreathGroup& W, const SemidirectElement& s) {
  if (wreath_ring(W) != s.P.ring) throw std::invalid_argument("ring mismatch");
  std::vector<std::pair<Vec, Vec>> f;
  for (auto [e, c] : s.P.coeffs) f.push_back({{e}, {c}});
  return W.make(f, {s.m});
}

std::optional<ClassCertificate> same_conjugacy_class(const SemidirectElement& g1, const SemidirectElement& g2) {
  require_same_ring(g1.P, g2.P);
  const Ring r = g1.P.ring;
  if (g1.m != g2.m) return std::nullopt;
  const Int m = g1.m;
  if (m == 0) {
    if (g1.P.is_zero() != g2.P.is_zero()) return std::nullopt;
    if (g1.P.is_zero()) return ClassCertificate{0, poly_zero(r)};
    Int ell = g2.P.min_exp() - g1.P.min_exp();
    if (poly_shift(g1.P, ell) != g2.P) return std::nullopt;
    return ClassCertificate{ell, poly_zero(r)};
  }
  const Int e = m < 0 ? -m : m;
  Vec F1 = fold(g1.P, e), F2 = fold(g2.P, e);
  for (Int ell = 0; ell < e; ++ell) {
    if (rotate(F1, ell) != F2) continue;
    LaurentPoly Q = divide_by_x_pow_minus_one(poly_sub(g2.P, poly_shift(g1.P, ell)), e);
    if (m < 0) Q = poly_neg(poly_shift(Q, e));
    ClassCertificate c{ell, Q};
    if (sd_conjugate(certificate_conjugator(c), g1) != g2) throw ContractViolation("class certificate failed");
    return c;
  }
  return std::nullopt;
}

SemidirectElement certificate_conjugator(const ClassCertificate& c) { return {poly_neg(c.Q), c.ell}; }

// ---------- dense polynomials ----------

Dense dense_trim(Dense a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

Dense dense_mod(const Dense& a, const Dense& m, Ring r) {
  Dense md = dense_trim(m);
  if (md.empty()) throw std::invalid_argument("division by zero polynomial");
  Dense rem = dense_trim(a);
  if (r != 0)
    for (Int& c : rem) c = floor_mod(c, r);
  rem = dense_trim(rem);
  const std::size_t dm = md.size() - 1;
  Int lead_inv;
  if (r == 0) {
    if (md.back() != 1) throw std::invalid_argument("integer division needs a monic modulus");
    lead_inv = 1;
  } else {
    lead_inv = inv_mod(md.back(), r);
  }
  while (rem.size() > dm) {
    Int c = rem.back();
    if (r != 0) c = c * lead_inv % r;
    const std::size_t shift = rem.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) {
      Int& slot = rem[shift + i];
      slot = r == 0 ? checked_add(slot, -checked_mul(c, md[i])) : floor_mod(slot - c * md[i], r);
    }
    rem = dense_trim(rem);
  }
  return rem;
}

Dense dense_gcd_fp(Dense a, Dense b, Int p) {
  a = dense_trim(a);
  b = dense_trim(b);
  for (Int& c : a) c = floor_mod(c, p);
  for (Int& c : b) c = floor_mod(c, p);
  a = dense_trim(a);
  b = dense_trim(b);
  while (!b.empty()) {
    Dense r = dense_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(a, p);
}

Dense dense_powmod_x(std::uint64_t e, const Dense& m, Int p) {
  Dense result = dense_mod({1}, m, p);
  Dense base = dense_mod({0, 1}, m, p);
  while (e > 0) {
    if (e & 1) result = dense_mul_mod_fp(result, base, m, p);
    base = dense_mul_mod_fp(base, base, m, p);
    e >>= 1;
  }
  return result;
}

bool is_irreducible_fp(const Dense& f0, Int p) {
  Dense f = make_monic(f0, p);
  if (f.size() < 2) return false;
  const std::size_t d = f.size() - 1;
  if (d == 1) return true;
  // f is irreducible iff gcd(f, x^{p^i} - x) = 1 for all 1 <= i <= d/2.
  Dense h = dense_mod({0, 1}, f, p);
  for (std::size_t i = 1; i <= d / 2; ++i) {
    Dense acc = dense_mod({1}, f, p);
    Dense base = h;
    for (Int e = p; e > 0; e >>= 1) {
      if (e & 1) acc = dense_mul_mod_fp(acc, base, f, p);
      base = dense_mul_mod_fp(base, base, f, p);
    }
    h = acc;
    Dense g = dense_gcd_fp(f, dense_sub_fp(h, {0, 1}, p), p);
    if (g.size() > 1) return false;
  }
  return true;
}

std::string dense_to_string(const Dense& d, Ring r) { return to_string(from_vec(r, dense_trim(d))); }

// ---------- split subgroups ----------

std::string SplitSubgroup::describe() const {
  std::ostringstream os;
  os << ring_name(ring) << ":t=" << t << ";J=(";
  if (ring != 0) {
    os << dense_to_string(gen, ring);
  } else {
    os << to_string(x_pow_minus_one(0, period));
    for (const Vec& row : hnf) os << "," << to_string(from_vec(0, row));
  }
  os << ")";
  std::string s = os.str();
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  return s;
}

SplitSubgroup make_fp_subgroup(Int p, Int t, const Dense& gen) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  if (t < 1) throw std::invalid_argument("t must be positive");
  Dense g = make_monic(Dense(gen.begin(), gen.end()), p);
  if (g.empty() || g[0] == 0) throw std::invalid_argument("generator must be a nonzero polynomial with g(0) != 0");
  SplitSubgroup N;
  N.ring = p;
  N.t = t;
  N.gen = g;
  N.characteristic = p;
  N.quotient_size = 1;
  for (std::size_t i = 1; i < g.size(); ++i)
    if (__builtin_mul_overflow(N.quotient_size, static_cast<std::uint64_t>(p), &N.quotient_size))
      throw BudgetExceeded("quotient too large");
  return N;
}

SplitSubgroup make_z_subgroup(Int t, Int period, const std::vector<LaurentPoly>& gens) {
  if (t < 1 || period < 1) throw std::invalid_argument("t and period must be positive");
  std::vector<Vec> folded;
  for (const LaurentPoly& g : gens) {
    if (g.ring != 0) throw std::invalid_argument("integer ideal needs integer generators");
    folded.push_back(fold(g, period));
  }
  SplitSubgroup N;
  N.ring = 0;
  N.t = t;
  N.period = period;
  N.hnf = hnf_full(lattice_with_shifts(folded, period), period);
  N.quotient_size = hnf_volume(N.hnf);
  N.characteristic = lattice_characteristic(N.hnf);
  return N;
}

bool is_normal(const SplitSubgroup& N) {
  if (N.ring != 0) return dense_powmod_x(static_cast<std::uint64_t>(N.t), N.gen, N.ring) == Dense{1} || N.gen.size() == 1;
  return ideal_contains(N, x_pow_minus_one(0, N.t));
}

Vec ideal_residue(const SplitSubgroup& N, const LaurentPoly& P) {
  if (P.ring != N.ring) throw std::invalid_argument("ring mismatch");
  if (N.ring != 0) {
    if (!is_normal(N)) throw std::invalid_argument("residues need gen | x^t - 1");
    Dense r = dense_mod(fold(P, N.t), N.gen, N.ring);
    r.resize(N.gen.size() - 1, 0);
    return r;
  }
  return hnf_residue(N.hnf, fold(P, N.period));
}

bool ideal_contains(const SplitSubgroup& N, const LaurentPoly& P) {
  Vec r = ideal_residue(N, P);
  return std::all_of(r.begin(), r.end(), [](Int c) { return c == 0; });
}

std::vector<SplitSubgroup> enumerate_split_subgroups_fp(Int p, std::uint64_t max_index) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  std::vector<SplitSubgroup> out;
  for (std::uint64_t t = 1; t <= max_index; ++t) {
    std::uint64_t budget = max_index / t;
    Int maxdeg = 0;
    for (std::uint64_t s = p; s <= budget; s *= static_cast<std::uint64_t>(p)) ++maxdeg;
    out.push_back(make_fp_subgroup(p, static_cast<Int>(t), {1}));
    for (Int d = 1; d <= maxdeg; ++d) {
      for (const Dense& g : monic_of_degree(p, d)) {
        if (g[0] == 0) continue;
        if (dense_powmod_x(t, g, p) != Dense{1}) continue;
        out.push_back(make_fp_subgroup(p, static_cast<Int>(t), g));
      }
    }
  }
  std::sort(out.begin(), out.end(), split_less);
  return out;
}

std::vector<SplitSubgroup> enumerate_split_subgroups_z(std::uint64_t max_index, std::uint64_t ceiling) {
  std::vector<SplitSubgroup> out;
  std::uint64_t work = 0;
  auto spend = [&](std::uint64_t n) {
    work += n;
    if (work > ceiling) throw BudgetExceeded("integer ideal search exceeds ceiling " + std::to_string(ceiling));
  };
  const std::vector<Int> all_primes = primes_up_to(max_index);
  std::map<Int, std::vector<Dense>> irreducibles;  // prime -> monic irreducibles other than x

  // The x-order T of R/J satisfies T <= |R/J| <= max_index / t <= max_index / T.
  for (Int T = 1; static_cast<std::uint64_t>(T) * static_cast<std::uint64_t>(T) <= max_index; ++T) {
    const std::uint64_t S = max_index / static_cast<std::uint64_t>(T);
    std::vector<Vec> I(T, Vec(T, 0));
    for (Int i = 0; i < T; ++i) I[i][i] = 1;
    std::map<std::vector<Vec>, std::uint64_t> seen{{I, 1}};
    std::deque<std::vector<Vec>> queue{I};
    while (!queue.empty()) {
      std::vector<Vec> H = queue.front();
      queue.pop_front();
      const std::uint64_t size = seen.at(H);
      spend(1);
      for (Int p : all_primes) {
        if (size * static_cast<std::uint64_t>(p) > S) break;
        Int fmax = 0;
        for (std::uint64_t s = size * p; s <= S && fmax < T; s *= static_cast<std::uint64_t>(p)) ++fmax;
        // Multiplication by x in the basis H, reduced mod p.
        std::vector<Vec> C(T, Vec(T, 0));
        for (Int i = 0; i < T; ++i) {
          auto c = hnf_coords(H, rotate(H[i], 1));
          if (!c) throw ContractViolation("lattice is not x-stable");
          for (Int j = 0; j < T; ++j) C[i][j] = floor_mod((*c)[j], p);
        }
        auto& irr = irreducibles[p];
        if (irr.empty() || static_cast<Int>(irr.back().size()) - 1 < fmax) {
          irr.clear();
          for (Int d = 1; d <= fmax; ++d)
            for (const Dense& g : monic_of_degree(p, d))
              if (g[0] != 0 && is_irreducible_fp(g, p)) irr.push_back(g);
        }
        for (const Dense& phi : irr) {
          const Int f = static_cast<Int>(phi.size()) - 1;
          if (f > fmax) break;
          std::vector<Vec> K = nullspace_mod_p(poly_of_matrix(phi, C, p), T, p);
          if (K.empty()) continue;
          std::uint64_t count = 1;
          for (std::size_t i = 0; i < K.size(); ++i) {
            count *= static_cast<std::uint64_t>(p);
            if (count > ceiling) throw BudgetExceeded("kernel too large for ideal search");
          }
          spend(count);
          Vec coef(K.size(), 0);
          for (std::uint64_t idx = 1; idx < count; ++idx) {
            for (std::size_t i = 0; i < coef.size(); ++i) {
              if (++coef[i] < p) break;
              coef[i] = 0;
            }
            Vec u(T, 0);
            for (std::size_t i = 0; i < K.size(); ++i)
              for (Int j = 0; j < T; ++j) u[j] = (u[j] + coef[i] * K[i][j]) % p;
            // U = span(u, Cu, ...) is simple; its annihilator W in row space is maximal.
            std::vector<Vec> U{u};
            for (Int k = 1; k < f; ++k) U.push_back(mat_vec_mod(C, U.back(), p));
            std::vector<Vec> Wbasis = nullspace_mod_p(U, T, p);
            std::vector<Vec> gens;
            for (const Vec& h : H) {
              Vec ph(T);
              for (Int j = 0; j < T; ++j) ph[j] = checked_mul(p, h[j]);
              gens.push_back(ph);
            }
            for (const Vec& w : Wbasis) {
              Vec lift(T, 0);
              for (Int i = 0; i < T; ++i)
                if (w[i] != 0)
                  for (Int j = 0; j < T; ++j) lift[j] = checked_add(lift[j], checked_mul(w[i], H[i][j]));
              gens.push_back(lift);
            }
            std::vector<Vec> M = hnf_full(gens, T, checked_mul(p, static_cast<Int>(size)));
            std::uint64_t msize = hnf_volume(M);
            std::uint64_t expect = size;
            for (Int k = 0; k < f; ++k) expect *= static_cast<std::uint64_t>(p);
            if (msize != expect)
              throw ContractViolation("maximal submodule has unexpected index");
            if (seen.emplace(M, msize).second) queue.push_back(M);
          }
        }
      }
    }
    for (const auto& [H, size] : seen) {
      if (lattice_period(H) != T) continue;
      for (Int t = T; static_cast<std::uint64_t>(t) * size <= max_index; t += T) {
        SplitSubgroup N;
        N.ring = 0;
        N.t = t;
        N.period = T;
        N.hnf = H;
        N.quotient_size = size;
        N.characteristic = lattice_characteristic(H);
        out.push_back(std::move(N));
      }
    }
  }
  std::sort(out.begin(), out.end(), split_less);
  return out;
}

std::vector<SplitSubgroup> enumerate_split_subgroups(Ring r, std::uint64_t max_index, std::uint64_t ceiling) {
  return r == 0 ? enumerate_split_subgroups_z(max_index, ceiling) : enumerate_split_subgroups_fp(r, max_index);
}

bool conjugate_in_split_quotient(const SemidirectElement& g1, const SemidirectElement& g2, const SplitSubgroup& N) {
  require_same_ring(g1.P, g2.P);
  if (g1.P.ring != N.ring) throw std::invalid_argument("ring mismatch");
  if (!is_normal(N)) throw std::invalid_argument("subgroup is not normal: " + N.describe());
  if (floor_mod(g1.m - g2.m, N.t) != 0) return false;
  const Int am = g1.m < 0 ? -g1.m : g1.m;
  if (N.ring != 0) {
    const Int p = N.ring;
    // Ideal J + (x^m - 1) = (G), G | x^t - 1, so exponents fold mod t.
    Dense xm = dense_powmod_x(static_cast<std::uint64_t>(am), N.gen, p);
    Dense G = dense_gcd_fp(N.gen, dense_sub_fp(xm, {1}, p), p);
    if (G.size() == 1) return true;
    Vec r1 = fold(g1.P, N.t), r2 = fold(g2.P, N.t);
    for (Int ell = 0; ell < N.t; ++ell) {
      Dense d = dense_sub_fp(r2, rotate(r1, ell), p);
      if (dense_mod(d, G, p).empty()) return true;
    }
    return false;
  }
  const Int T = N.period;
  std::vector<Vec> rows = N.hnf;
  Vec xm(T, 0);
  xm[floor_mod(am, T)] += 1;
  xm[0] -= 1;
  for (Int s = 0; s < T; ++s) rows.push_back(rotate(xm, s));
  std::vector<Vec> H = hnf_full(rows, T, static_cast<Int>(N.quotient_size));
  Vec r1 = fold(g1.P, T), r2 = fold(g2.P, T);
  for (Int ell = 0; ell < T; ++ell) {
    Vec d = rotate(r1, ell);
    for (Int j = 0; j < T; ++j) d[j] = checked_add(r2[j], -d[j]);
    if (hnf_coords(H, d)) return true;
  }
  return false;
}

// ---------- ideal arithmetic certificates ----------

ModIdealCertificate mod_ideal_reduce(Int m, Int n, Int d) {
  if (m == 0 || n == 0) throw std::invalid_argument("m and n must be nonzero");
  if (d < 1) throw std::invalid_argument("d must be positive");
  // Extended Euclid on |m|, |n|.
  Int a = m < 0 ? -m : m, b = n < 0 ? -n : n;
  Int x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    Int q = a / b;
    std::tie(a, b) = std::make_pair(b, a - q * b);
    std::tie(x0, x1) = std::make_pair(x1, x0 - q * x1);
    std::tie(y0, y1) = std::make_pair(y1, y0 - q * y1);
  }
  ModIdealCertificate c;
  c.m = m;
  c.n = n;
  c.d = d;
  c.g = a;
  c.t = m < 0 ? -x0 : x0;
  c.s = n < 0 ? -y0 : y0;
  c.u = geometric(0, c.g, m / c.g);
  c.w = geometric(0, m, c.t);
  c.v = poly_shift(geometric(0, n, c.s), checked_mul(c.t, m));
  if (!verify_mod_ideal(c)) throw ContractViolation("ideal certificate failed");
  return c;
}

bool verify_mod_ideal(const ModIdealCertificate& c) {
  if (c.t * c.m + c.s * c.n != c.g) return false;
  LaurentPoly xg = x_pow_minus_one(0, c.g), xm = x_pow_minus_one(0, c.m), xn = x_pow_minus_one(0, c.n);
  return poly_add(poly_mul(c.w, xm), poly_mul(c.v, xn)) == xg && poly_mul(c.u, xg) == xm;
}

// ---------- number theory ----------

bool is_prime(Int n) {
  if (n < 2) return false;
  for (Int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Int multiplicative_order(Int a, Int q) {
  if (q == 1) return 1;
  if (std::gcd(floor_mod(a, q), q) != 1) throw std::invalid_argument("a is not a unit mod q");
  Int x = floor_mod(a, q), k = 1;
  while (x != 1) {
    x = static_cast<Int>(static_cast<__int128>(x) * a % q);
    x = floor_mod(x, q);
    ++k;
  }
  return k;
}

LaurentPoly psi_poly(Int q, Ring r) {
  if (q < 1) throw std::invalid_argument("q must be positive");
  return geometric(r, 1, q);
}

std::vector<Int> primitive_root_primes(Int p, std::size_t count) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  std::vector<Int> out;
  for (Int q = p + 1; out.size() < count; ++q) {
    if (!is_prime(q) || multiplicative_order(p, q) != q - 1) continue;
    Dense psi(q, 1);
    if (!is_irreducible_fp(psi, p)) throw ContractViolation("psi_q is reducible although p is primitive mod q");
    out.push_back(q);
  }
  return out;
}

}  // namespace wcs
