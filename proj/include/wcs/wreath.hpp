#pragma once

// Restricted wreath products A wr B of finitely generated abelian groups.
//
// Convention: B acts on functions by translating supports,
//   (b . f)(x) = f(x - b),   so supp(b . f) = b + supp(f),
// and (f1, b1)(f2, b2) = (f1 + b1 . f2, b1 + b2). Under P(f) = sum f(m) x^m
// this matches P(b . f) = x^b P(f) in the Laurent model.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wcs/abelian.hpp"

namespace wcs {

/// Finitely supported map B -> A. Keys are normalized elements of B; stored
/// values are normalized, nonzero elements of A.
using Func = std::map<Vec, Vec>;

struct WreathElement {
  Func f;
  Vec b;
  bool operator==(const WreathElement&) const = default;
  auto operator<=>(const WreathElement&) const = default;
};

struct WordLength {
  Int value = 0;
  bool exact = true;
};

struct Reduction {
  WreathElement reduced;
  WreathElement conjugator;  // conjugator * g * conjugator^{-1} == reduced
};

class WreathGroup {
 public:
  WreathGroup() = default;
  WreathGroup(AbelianGroup A, AbelianGroup B) : A_(std::move(A)), B_(std::move(B)) {}

  const AbelianGroup& base() const { return A_; }
  const AbelianGroup& acting() const { return B_; }
  bool is_finite() const { return A_.is_finite() && B_.is_finite(); }
  std::string to_string() const { return A_.to_string() + " wr " + B_.to_string(); }
  bool operator==(const WreathGroup&) const = default;

  WreathElement identity() const { return {{}, B_.zero()}; }
  /// Builds an element, normalizing coordinates, merging repeated keys and
  /// dropping zero values.
  WreathElement make(const std::vector<std::pair<Vec, Vec>>& f, const Vec& b) const;
  WreathElement base_element(const Func& f) const { return {f, B_.zero()}; }
  WreathElement acting_element(const Vec& b) const { return {{}, B_.normalize(b)}; }
  void check(const WreathElement& g) const;

  Func act(const Vec& b, const Func& f) const;
  Func add(const Func& f, const Func& h) const;
  Func neg(const Func& f) const;

  WreathElement multiply(const WreathElement& x, const WreathElement& y) const;
  WreathElement inverse(const WreathElement& g) const;
  /// z g z^{-1}
  WreathElement conjugate(const WreathElement& z, const WreathElement& g) const;

  WordLength word_length(const WreathElement& g) const;

  bool is_reduced(const WreathElement& g) const;
  Reduction reduce(const WreathElement& g) const;

  /// Some z with z g1 z^{-1} == g2, re-verified, or empty.
  std::optional<WreathElement> conjugate_test(const WreathElement& g1, const WreathElement& g2) const;
  /// Exhaustive search over all conjugators of a finite wreath product.
  std::optional<WreathElement> brute_force_conjugate(const WreathElement& g1, const WreathElement& g2,
                                                     std::uint64_t budget = 1'000'000) const;
  /// Every element of a finite wreath product, in a fixed order.
  std::vector<WreathElement> elements(std::uint64_t budget = 1'000'000) const;

  std::string format(const WreathElement& g) const;

 private:
  // h with h - b.h = v*delta_to - v*delta_from, where to - from lies in <b>.
  Func mover(const Vec& b, const Vec& v, const Vec& from, const Vec& to) const;

  AbelianGroup A_, B_;
};

/// Support of f as a sorted set.
std::vector<Vec> support(const Func& f);

/// Some c with c + X == Y as sets, or empty.
std::optional<Vec> is_translate(const AbelianGroup& B, const std::vector<Vec>& X, const std::vector<Vec>& Y);
/// Every c with c + X == Y. For X == Y == {} the answer is all of B when B is
/// finite and {0} otherwise.
std::vector<Vec> all_translators(const AbelianGroup& B, const std::vector<Vec>& X, const std::vector<Vec>& Y);

/// Conjugation by acting elements only, compared coset-wise: every c in B
/// (B finite) such that the per-coset sums of (-c).f1 and f2 agree on all
/// cosets of <b>. Both elements must share b.
std::vector<Vec> coset_translators(const WreathGroup& W, const WreathElement& g1, const WreathElement& g2);

/// Canonical extension of pi: B -> B' to A wr B -> A wr B'. Values over a
/// fibre are summed.
WreathElement extend_quotient_acting(const WreathGroup& W, const QuotientMap& pi, const WreathElement& g);
/// Pointwise extension of pi: A -> A'.
WreathElement extend_quotient_base(const WreathGroup& W, const QuotientMap& pi, const WreathElement& g);

/// Retraction onto sub-wreath R_A wr R_B given by coordinate subsets of A and
/// of B (each subset a list of direct-summand indices).
struct Retraction {
  std::vector<std::size_t> base_coords;
  std::vector<std::size_t> acting_coords;
};
WreathGroup retract_target(const WreathGroup& W, const Retraction& r);
WreathElement retract_wreath(const WreathGroup& W, const Retraction& r, const WreathElement& g);
/// Inclusion R_A wr R_B -> A wr B (zero on the other summands).
WreathElement embed_retract(const WreathGroup& W, const Retraction& r, const WreathElement& g);

}  // namespace wcs
