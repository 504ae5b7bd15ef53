#include "wcs/witness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "wcs/errors.hpp"

namespace wcs {

namespace {

constexpr int kMaxCandidateModuli = 64;

/// Least element of x + <b> in a finite group.
Vec coset_key(const AbelianGroup& B, const Vec& b, const Vec& x) {
  Vec best = x, y = x;
  const Int ord = *B.element_order(b);
  for (Int j = 1; j < ord; ++j) {
    y = B.add(y, b);
    best = std::min(best, y);
  }
  return best;
}

std::map<Vec, Vec> coset_sums(const WreathGroup& W, const Vec& b, const Func& f) {
  const AbelianGroup& A = W.base();
  std::map<Vec, Vec> s;
  for (const auto& [x, v] : f) {
    Vec k = coset_key(W.acting(), b, x);
    auto it = s.find(k);
    if (it == s.end()) {
      s.emplace(k, v);
    } else {
      it->second = A.add(it->second, v);
      if (A.is_zero(it->second)) s.erase(it);
    }
  }
  return s;
}

void fill_order(WitnessQuotient& q) {
  if (q.abelian_target) {
    q.order = q.abelian_group.order();
    q.log2_order = q.abelian_group.log2_order();
    return;
  }
  const AbelianGroup& A = q.target.base();
  const AbelianGroup& B = q.target.acting();
  const std::uint64_t nb = *B.order();
  q.log2_order = static_cast<double>(nb) * A.log2_order() + B.log2_order();
  q.order.reset();
  if (auto na = A.order()) {
    std::uint64_t o = nb;
    bool ok = true;
    for (std::uint64_t i = 0; i < nb && ok; ++i)
      if (__builtin_mul_overflow(o, *na, &o) || o > (std::uint64_t{1} << 62)) ok = false;
    if (ok) q.order = o;
  }
}

void require_nonconjugate(const WreathGroup& W, const WreathElement& g1, const WreathElement& g2) {
  W.check(g1);
  W.check(g2);
  if (W.conjugate_test(g1, g2)) throw std::invalid_argument("elements are conjugate; no separating quotient exists");
}

struct ModulusPlan {
  Int first = 1;
  Int step = 1;
};

ModulusPlan modulus_plan(const AbelianGroup& B, const Vec& b, Int ell) {
  const Vec phi = B.free_part(b);
  const int k = B.free_rank();
  const Int e = B.exponent();
  Int base, lower;
  if (k == 1) {
    base = lcm(std::abs(phi[0]), e);
    lower = 4 * ell;
  } else {
    base = lcm(std::abs(gcd_vector(phi)), e);
    lower = static_cast<Int>(k) * (Int{1} << k) * 4 * ell * ell;
  }
  return {((lower + base - 1) / base) * base, base};
}

}  // namespace

std::string to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::SupportSize: return "support-size";
    case CertificateKind::NonTranslate: return "non-translate";
    case CertificateKind::ValueMismatch: return "value-mismatch";
    case CertificateKind::ActingElement: return "acting-element";
  }
  return "?";
}

bool modulus_separates(const AbelianGroup& B, const Vec& b, const std::vector<Vec>& points, Int m) {
  const QuotientMap pi = quotient_mod(B, m);
  std::set<Vec> images;
  for (const Vec& x : points)
    if (!images.insert(pi.apply(x)).second) return false;
  const Vec pb = pi.apply(b);
  for (const Vec& x : points)
    for (const Vec& y : points) {
      const Vec d = B.sub(x, y);
      if (B.in_cyclic(d, b) != pi.target.in_cyclic(pi.apply(d), pb)) return false;
    }
  return true;
}

Int separating_modulus(const AbelianGroup& B, const Vec& b, const std::vector<Vec>& points, Int ell) {
  if (ell < 1) throw std::invalid_argument("radius must be positive");
  B.check(b);
  if (B.is_zero(B.free_part(b)) || B.free_rank() == 0)
    throw std::invalid_argument("separating_modulus needs b of infinite order");
  for (const Vec& x : points)
    if (B.word_length(x) > ell) throw std::invalid_argument("point " + format_vec(x) + " lies outside the ball");
  const ModulusPlan plan = modulus_plan(B, b, ell);
  for (Int m = plan.first, i = 0; i < 100000; m += plan.step, ++i)
    if (modulus_separates(B, b, points, m)) return m;
  throw ContractViolation("no separating modulus found");
}

Int translation_preserving_modulus(Int ell) {
  if (ell < 1) throw std::invalid_argument("radius must be positive");
  return 4 * ell;
}

QuotientMap rf_quotient(const AbelianGroup& A, const Vec& r0) {
  const Vec r = A.normalize(r0);
  if (A.is_zero(r)) throw std::invalid_argument("rf_quotient needs a nonzero element");
  if (!A.is_zero(A.torsion_part(r))) {
    QuotientMap pi = quotient_mod(A, 1);
    if (pi.target.is_zero(pi.apply(r))) throw ContractViolation("torsion quotient kills r");
    return pi;
  }
  for (Int m = 2;; ++m) {
    QuotientMap pi = quotient_mod(A, m);
    if (!pi.target.is_zero(pi.apply(r))) return pi;
  }
}

CertificateKind classify_nonconjugacy(const WreathGroup& W, const WreathElement& g1, const WreathElement& g2) {
  if (g1.b != g2.b) return CertificateKind::ActingElement;
  const AbelianGroup& B = W.acting();
  const Vec& b = g1.b;
  const auto s1 = coset_sums(W, b, g1.f), s2 = coset_sums(W, b, g2.f);
  if (s1.size() != s2.size()) return CertificateKind::SupportSize;
  std::set<Vec> pattern2;
  for (const auto& [k, v] : s2) pattern2.insert(k);
  for (const Vec& c : B.elements()) {
    std::set<Vec> moved;
    for (const auto& [k, v] : s1) moved.insert(coset_key(B, b, B.add(c, k)));
    if (moved == pattern2) return CertificateKind::ValueMismatch;
  }
  return CertificateKind::NonTranslate;
}

WreathElement witness_image(const WitnessQuotient& q, const WreathElement& g) {
  q.source.check(g);
  if (q.abelian_target) return {{}, q.acting_map ? q.acting_map->apply(g.b) : g.b};
  WreathElement e = g;
  WreathGroup mid = q.source;
  if (q.acting_map) {
    e = extend_quotient_acting(q.source, *q.acting_map, e);
    mid = WreathGroup(q.source.base(), q.acting_map->target);
  }
  if (q.base_map) e = extend_quotient_base(mid, *q.base_map, e);
  return e;
}

bool witness_separates(const WitnessQuotient& q, const WreathElement& g1, const WreathElement& g2) {
  const WreathElement i1 = witness_image(q, g1), i2 = witness_image(q, g2);
  if (q.abelian_target) return i1.b != i2.b;
  if (!q.target.is_finite()) return false;
  return !q.target.conjugate_test(i1, i2).has_value();
}

WitnessQuotient witness_base_quotient(const WreathGroup& W, const WreathElement& g1, const WreathElement& g2) {
  const AbelianGroup& A = W.base();
  const AbelianGroup& B = W.acting();
  if (!B.is_finite()) throw std::invalid_argument("witness_base_quotient needs a finite acting group");
  require_nonconjugate(W, g1, g2);
  WitnessQuotient q;
  q.source = W;
  q.target = W;
  if (!A.is_finite()) {
    const WreathElement r1 = W.reduce(g1).reduced, r2 = W.reduce(g2).reduced;
    if (r1.b != r2.b) throw std::invalid_argument("acting elements differ; use the acting-element shortcut");
    Int M = 1;
    // Keep every range value alive, so supports survive the quotient.
    for (const auto* f : {&r1.f, &r2.f})
      for (const auto& [x, v] : *f) M = lcm(M, rf_quotient(A, v).modulus);
    // For each acting translate c, keep one coset whose sums disagree.
    const auto s2 = coset_sums(W, r1.b, r2.f);
    for (const Vec& c : B.elements()) {
      const auto s1 = coset_sums(W, r1.b, W.act(c, r1.f));
      std::set<Vec> keys;
      for (const auto& [k, v] : s1) keys.insert(k);
      for (const auto& [k, v] : s2) keys.insert(k);
      bool found = false;
      for (const Vec& k : keys) {
        auto a = s1.find(k), b = s2.find(k);
        Vec va = a == s1.end() ? A.zero() : a->second;
        Vec vb = b == s2.end() ? A.zero() : b->second;
        if (va == vb) continue;
        M = lcm(M, rf_quotient(A, A.sub(va, vb)).modulus);
        found = true;
        break;
      }
      if (!found) throw ContractViolation("acting translate conjugates nonconjugate elements");
    }
    q.base_map = quotient_mod(A, M);
    q.target = WreathGroup(q.base_map->target, B);
    q.transcript.push_back("base modulus " + std::to_string(M) + " from range values and per-translate mismatches");
  }
  q.image1 = witness_image(q, g1);
  q.image2 = witness_image(q, g2);
  if (q.target.conjugate_test(q.image1, q.image2))
    throw ContractViolation("base quotient images are conjugate");
  q.kind = classify_nonconjugacy(q.target, q.target.reduce(q.image1).reduced, q.target.reduce(q.image2).reduced);
  q.transcript.push_back("images nonconjugate in " + q.target.to_string() + " (" + to_string(q.kind) + ")");
  fill_order(q);
  return q;
}

WitnessQuotient witness_acting_quotient(const WreathGroup& W, const WreathElement& g1, const WreathElement& g2) {
  const AbelianGroup& A = W.base();
  const AbelianGroup& B = W.acting();
  require_nonconjugate(W, g1, g2);
  const WreathElement r1 = W.reduce(g1).reduced, r2 = W.reduce(g2).reduced;
  if (r1.b != r2.b) throw std::invalid_argument("acting elements differ; use the acting-element shortcut");
  if (B.is_finite()) return witness_base_quotient(W, g1, g2);

  const Vec& b = r1.b;
  std::set<Vec> pts;
  for (const auto* f : {&r1.f, &r2.f})
    for (const auto& [x, v] : *f) pts.insert(x);
  const std::vector<Vec> points(pts.begin(), pts.end());
  Int ell = 1;
  for (const Vec& x : points) ell = std::max(ell, B.word_length(x));

  ModulusPlan plan;
  Int bound = 0;
  const bool degenerate = B.is_zero(B.free_part(b));
  if (degenerate) {
    // <b> is finite: separate every difference coordinate outright.
    Int mx = 0;
    for (const Vec& x : points)
      for (const Vec& y : points)
        for (int i = 0; i < B.free_rank(); ++i) mx = std::max(mx, std::abs(x[i] - y[i]));
    plan = {1 + 2 * mx, 1};
    if (plan.first < 2) plan.first = 2;
  } else {
    plan = modulus_plan(B, b, ell);
    plan.first = separating_modulus(B, b, points, ell);
    const int k = B.free_rank();
    bound = k == 1 ? 8 * ell : static_cast<Int>(k) * (Int{1} << (k + 2)) * ell * ell;
  }

  std::vector<std::string> log;
  Int m = plan.first;
  for (int attempt = 0; attempt < kMaxCandidateModuli; ++attempt, m += plan.step) {
    if (!degenerate && attempt > 0 && !modulus_separates(B, b, points, m)) {
      log.push_back("acting modulus " + std::to_string(m) + " skipped: hypotheses fail");
      continue;
    }
    const QuotientMap pi = quotient_mod(B, m);
    const WreathGroup mid(A, pi.target);
    const WreathElement e1 = extend_quotient_acting(W, pi, g1), e2 = extend_quotient_acting(W, pi, g2);
    if (mid.conjugate_test(e1, e2)) {
      log.push_back("acting modulus " + std::to_string(m) + ": images conjugate, trying next");
      continue;
    }
    WitnessQuotient q = witness_base_quotient(mid, e1, e2);
    q.source = W;
    q.acting_map = pi;
    q.image1 = witness_image(q, g1);
    q.image2 = witness_image(q, g2);
    q.ell = ell;
    q.modulus_bound = bound;
    log.push_back("acting modulus " + std::to_string(m) + " (radius " + std::to_string(ell) + ")");
    q.transcript.insert(q.transcript.begin(), log.begin(), log.end());
    if (!witness_separates(q, g1, g2)) throw ContractViolation("composite witness fails re-verification");
    fill_order(q);
    return q;
  }
  throw ContractViolation("no separating acting modulus among the candidates");
}

WitnessQuotient full_witness(const WreathGroup& W, const WreathElement& g1, const WreathElement& g2) {
  require_nonconjugate(W, g1, g2);
  const AbelianGroup& B = W.acting();
  if (g1.b != g2.b) {
    WitnessQuotient q;
    q.source = W;
    q.abelian_target = true;
    q.acting_map = rf_quotient(B, B.sub(g1.b, g2.b));
    q.abelian_group = q.acting_map->target;
    q.image1 = witness_image(q, g1);
    q.image2 = witness_image(q, g2);
    q.kind = CertificateKind::ActingElement;
    if (q.image1.b == q.image2.b) throw ContractViolation("acting quotient identifies b and c");
    q.transcript.push_back("acting elements differ; " + format_vec(q.image1.b) + " != " + format_vec(q.image2.b) +
                           " in " + q.abelian_group.to_string());
    fill_order(q);
    return q;
  }
  return witness_acting_quotient(W, g1, g2);
}

}  // namespace wcs
