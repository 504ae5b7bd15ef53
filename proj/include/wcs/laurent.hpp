#pragma once

// Laurent model of R wr Z for R = Z or F_p:  R wr Z ~ R[x, x^-1] x| Z with
// (Q, l)(P, m) = (Q + x^l P, l + m).

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wcs/abelian.hpp"
#include "wcs/wreath.hpp"

namespace wcs {

/// Ring tag: 0 for Z, otherwise the prime p of F_p.
using Ring = Int;

struct LaurentPoly {
  Ring ring = 0;
  std::map<Int, Int> coeffs;  // exponent -> nonzero coefficient, F_p values in [1, p)

  bool is_zero() const { return coeffs.empty(); }
  Int min_exp() const { return coeffs.begin()->first; }
  Int max_exp() const { return coeffs.rbegin()->first; }
  Int coeff(Int e) const;
  bool operator==(const LaurentPoly&) const = default;
};

LaurentPoly poly_zero(Ring r);
LaurentPoly poly_monomial(Ring r, Int c, Int e);
/// x^m - 1.
LaurentPoly x_pow_minus_one(Ring r, Int m);
LaurentPoly poly_add(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly poly_sub(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly poly_neg(const LaurentPoly& a);
LaurentPoly poly_scale(const LaurentPoly& a, Int c);
LaurentPoly poly_mul(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly poly_shift(const LaurentPoly& a, Int m);

std::string to_string(const LaurentPoly& p);
LaurentPoly parse_poly(const std::string& text, Ring r);
std::string ring_name(Ring r);
Ring parse_ring(const std::string& tag);

struct SemidirectElement {
  LaurentPoly P;
  Int m = 0;
  bool operator==(const SemidirectElement&) const = default;
};

SemidirectElement sd_multiply(const SemidirectElement& a, const SemidirectElement& b);
SemidirectElement sd_inverse(const SemidirectElement& a);
SemidirectElement sd_conjugate(const SemidirectElement& z, const SemidirectElement& g);
std::string to_string(const SemidirectElement& g);
/// Parses "(P, m)".
SemidirectElement parse_semidirect(const std::string& text, Ring r);

/// Ring of a wreath product R wr Z; throws for any other shape.
Ring wreath_ring(const WreathGroup& W);
WreathGroup laurent_wreath_group(Ring r);
SemidirectElement from_wreath(const WreathGroup& W, const WreathElement& g);
WreathElement to_wreath(const WreathGroup& W, const SemidirectElement& s);

/// P2 = x^ell P1 + (x^m - 1) Q, i.e. (-Q, ell) conjugates g1 to g2.
struct ClassCertificate {
  Int ell = 0;
  LaurentPoly Q;
};
std::optional<ClassCertificate> same_conjugacy_class(const SemidirectElement& g1, const SemidirectElement& g2);
SemidirectElement certificate_conjugator(const ClassCertificate& c);

/// Dense polynomial, index = exponent, trailing zeros trimmed.
using Dense = std::vector<Int>;
Dense dense_trim(Dense a);
Dense dense_mod(const Dense& a, const Dense& m, Ring r);
Dense dense_gcd_fp(Dense a, Dense b, Int p);
Dense dense_powmod_x(std::uint64_t e, const Dense& m, Int p);
bool is_irreducible_fp(const Dense& f, Int p);
std::string dense_to_string(const Dense& d, Ring r);

/// Normal subgroup J x| tZ of R wr Z with finite index t * |R[x^+-1]/J|.
struct SplitSubgroup {
  Ring ring = 0;
  Int t = 1;
  // F_p: J = (gen), gen monic, gen(0) != 0, gen | x^t - 1.
  Dense gen;
  // Z: J is the preimage of a full-rank x-stable lattice L in Z^period =
  // Z[x]/(x^period - 1); hnf holds the upper-triangular HNF rows of L.
  Int period = 1;
  std::vector<Vec> hnf;
  Int characteristic = 1;
  std::uint64_t quotient_size = 1;  // |R[x^+-1] / J|

  std::uint64_t index() const { return static_cast<std::uint64_t>(t) * quotient_size; }
  std::string describe() const;
};

SplitSubgroup make_fp_subgroup(Int p, Int t, const Dense& gen);
/// Ideal of Z[x^+-1] generated by x^period - 1 and gens.
SplitSubgroup make_z_subgroup(Int t, Int period, const std::vector<LaurentPoly>& gens);

/// x^t - 1 lies in J, so J x| tZ is normal.
bool is_normal(const SplitSubgroup& N);
bool ideal_contains(const SplitSubgroup& N, const LaurentPoly& P);
/// Canonical residue of P modulo J (coefficient vector).
Vec ideal_residue(const SplitSubgroup& N, const LaurentPoly& P);

std::vector<SplitSubgroup> enumerate_split_subgroups_fp(Int p, std::uint64_t max_index);
/// Refuses (BudgetExceeded) when the ideal search would visit more than
/// `ceiling` ideals or kernel vectors.
std::vector<SplitSubgroup> enumerate_split_subgroups_z(std::uint64_t max_index, std::uint64_t ceiling = 1u << 20);
std::vector<SplitSubgroup> enumerate_split_subgroups(Ring r, std::uint64_t max_index,
                                                     std::uint64_t ceiling = 1u << 20);

bool conjugate_in_split_quotient(const SemidirectElement& g1, const SemidirectElement& g2, const SplitSubgroup& N);

/// x^g - 1 = w (x^m - 1) + v (x^n - 1) and x^m - 1 = u (x^g - 1), g = gcd(m, n)
/// = t m + s n. Both identities hold in Z[x^+-1], hence modulo (x^n - 1, d).
struct ModIdealCertificate {
  Int m = 0, n = 0, d = 0, g = 0, t = 0, s = 0;
  LaurentPoly u, w, v;
};
ModIdealCertificate mod_ideal_reduce(Int m, Int n, Int d);
bool verify_mod_ideal(const ModIdealCertificate& c);

bool is_prime(Int n);
Int multiplicative_order(Int a, Int q);
/// 1 + x + ... + x^{q-1}.
LaurentPoly psi_poly(Int q, Ring r);
/// First `count` primes q > p with p a primitive root mod q.
std::vector<Int> primitive_root_primes(Int p, std::size_t count);

}  // namespace wcs
