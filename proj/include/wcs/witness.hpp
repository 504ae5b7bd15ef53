#pragma once

// Explicit finite quotients of A wr B separating two nonconjugate elements.
// Every returned quotient has been re-checked in its finite target.

#include <optional>
#include <string>
#include <vector>

#include "wcs/abelian.hpp"
#include "wcs/wreath.hpp"

namespace wcs {

enum class CertificateKind { SupportSize, NonTranslate, ValueMismatch, ActingElement };
std::string to_string(CertificateKind k);

struct WitnessQuotient {
  WreathGroup source;
  std::optional<QuotientMap> acting_map;  // empty: identity on B
  std::optional<QuotientMap> base_map;    // empty: identity on A
  // Acting-element shortcut: target is the abelian quotient of B.
  bool abelian_target = false;
  AbelianGroup abelian_group;
  WreathGroup target;
  WreathElement image1, image2;  // abelian target: only .b is meaningful
  CertificateKind kind = CertificateKind::SupportSize;
  double log2_order = 0;
  std::optional<std::uint64_t> order;  // exact, when below 2^62
  Int ell = 0;                         // radius fed to the modulus conditions
  Int modulus_bound = 0;               // 8l (k = 1) or k 2^{k+2} l^2 (k >= 2); 0 if unused
  std::vector<std::string> transcript;

  Int acting_modulus() const { return acting_map ? acting_map->modulus : 0; }
  Int base_modulus() const { return base_map ? base_map->modulus : 0; }
};

/// Least m meeting the divisibility and size hypotheses for b such that
/// reduction mod m is injective on `points` and preserves <b>-membership of
/// every difference of points. Requires free_part(b) != 0.
Int separating_modulus(const AbelianGroup& B, const Vec& b, const std::vector<Vec>& points, Int ell);
/// Checks the two postconditions above for a given m.
bool modulus_separates(const AbelianGroup& B, const Vec& b, const std::vector<Vec>& points, Int m);

/// 4l.
Int translation_preserving_modulus(Int ell);

/// Least quotient_mod(A, m) not killing r; m = 1 (keep torsion only) when r
/// has a nonzero torsion coordinate.
QuotientMap rf_quotient(const AbelianGroup& A, const Vec& r);

WitnessQuotient witness_acting_quotient(const WreathGroup& W, const WreathElement& g1, const WreathElement& g2);
WitnessQuotient witness_base_quotient(const WreathGroup& W, const WreathElement& g1, const WreathElement& g2);
WitnessQuotient full_witness(const WreathGroup& W, const WreathElement& g1, const WreathElement& g2);

/// Image of g in the witness target.
WreathElement witness_image(const WitnessQuotient& q, const WreathElement& g);
/// Recomputes both images and decides their conjugacy in the finite target.
bool witness_separates(const WitnessQuotient& q, const WreathElement& g1, const WreathElement& g2);

/// Certificate classification of two nonconjugate elements of a finite
/// wreath product sharing the acting element.
CertificateKind classify_nonconjugacy(const WreathGroup& W, const WreathElement& g1, const WreathElement& g2);

}  // namespace wcs
