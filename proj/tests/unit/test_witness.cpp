#include <doctest.h>

#include <set>

#include "util.hpp"
#include "wcs/depth.hpp"
#include "wcs/errors.hpp"
#include "wcs/laurent.hpp"
#include "wcs/witness.hpp"

using namespace wcs;
using testutil::random_element;

namespace {

std::vector<Vec> reduce_set(const QuotientMap& pi, const std::vector<Vec>& X) {
  std::set<Vec> s;
  for (const Vec& x : X) s.insert(pi.apply(x));
  return {s.begin(), s.end()};
}

std::vector<Vec> interval(Int lo, Int hi) {
  std::vector<Vec> out;
  for (Int i = lo; i <= hi; ++i) out.push_back({i});
  return out;
}

}  // namespace

TEST_CASE("witness: separating_modulus examples") {
  const AbelianGroup Z(1);
  const std::vector<Vec> S = interval(-4, 4);
  const Int m = separating_modulus(Z, {1}, S, 4);
  CHECK(m == 16);
  CHECK(modulus_separates(Z, {1}, S, m));
  const AbelianGroup B(1, {2});
  std::vector<Vec> T;
  for (Int i = -3; i <= 3; ++i)
    for (Int e = 0; e < 2; ++e)
      if (B.word_length({i, e}) <= 3) T.push_back({i, e});
  const Int m2 = separating_modulus(B, {3, 0}, T, 3);
  CHECK(m2 == 12);
  CHECK(modulus_separates(B, {3, 0}, T, m2));
  CHECK_THROWS_AS(separating_modulus(B, {0, 1}, T, 3), std::invalid_argument);
}

TEST_CASE("witness: separating_modulus postconditions on every call") {
  const std::vector<AbelianGroup> groups = {AbelianGroup(1), AbelianGroup(2), AbelianGroup(1, {2}),
                                            AbelianGroup(2, {3})};
  for (int i = 0; i < 500; ++i) {
    const AbelianGroup& B = groups[i % groups.size()];
    Vec b;
    do b = testutil::random_vec(B, 4);
    while (norm1(B.free_part(b)) == 0);
    std::vector<Vec> pts;
    for (int j = testutil::uniform(1, 6); j > 0; --j) pts.push_back(testutil::random_vec(B, 5));
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    Int ell = B.word_length(b);
    for (const Vec& p : pts) ell = std::max(ell, B.word_length(p));
    const Int m = separating_modulus(B, b, pts, ell);
    const QuotientMap pi = quotient_mod(B, m);
    for (const Vec& p : pts)
      for (const Vec& q : pts) {
        REQUIRE((pi.apply(p) == pi.apply(q)) == (p == q));
        const Vec d = B.sub(p, q);
        REQUIRE(B.in_cyclic(d, b) == pi.target.in_cyclic(pi.apply(d), pi.apply(b)));
      }
  }
}

TEST_CASE("witness: translates at 4l") {
  CHECK(translation_preserving_modulus(7) == 28);
  const AbelianGroup Z(1);
  const QuotientMap pi28 = quotient_mod(Z, 28);
  const std::vector<Vec> X = {{0}, {3}}, Y = {{1}, {5}};
  CHECK_FALSE(is_translate(Z, X, Y).has_value());
  CHECK(all_translators(pi28.target, reduce_set(pi28, X), reduce_set(pi28, Y)).empty());
  const QuotientMap pi44 = quotient_mod(Z, translation_preserving_modulus(11));
  const std::vector<Vec> X2 = {{0}, {1}}, Y2 = {{9}, {10}};
  CHECK(is_translate(Z, X2, Y2) == Vec{9});
  CHECK(is_translate(pi44.target, reduce_set(pi44, X2), reduce_set(pi44, Y2)) == Vec{9});
}

TEST_CASE("witness: translator sets map injectively but not onto at 4l") {
  // X = Y = {-l, l}: only 0 translates upstairs, but 2l also works mod 4l.
  for (Int ell = 1; ell <= 6; ++ell) {
    const AbelianGroup Z(1);
    const QuotientMap pi = quotient_mod(Z, translation_preserving_modulus(ell));
    const std::vector<Vec> X = {{-ell}, {ell}};
    CHECK(all_translators(Z, X, X) == std::vector<Vec>{{0}});
    CHECK(all_translators(pi.target, reduce_set(pi, X), reduce_set(pi, X)) ==
          std::vector<Vec>{{0}, {2 * ell}});
  }
  for (int trial = 0; trial < 1000; ++trial) {
    const AbelianGroup Z(1);
    const Int ell = testutil::uniform(1, 6);
    std::set<Vec> xs, ys;
    const int size = static_cast<int>(testutil::uniform(1, std::min<Int>(5, 2 * ell + 1)));
    while (static_cast<int>(xs.size()) < size) xs.insert({testutil::uniform(-ell, ell)});
    if (trial % 2 == 0) {
      const Int c = testutil::uniform(-ell, ell);
      for (const Vec& x : xs)
        if (std::abs(x[0] + c) <= ell) ys.insert({x[0] + c});
    }
    while (static_cast<int>(ys.size()) < size) ys.insert({testutil::uniform(-ell, ell)});
    const std::vector<Vec> X(xs.begin(), xs.end()), Y(ys.begin(), ys.end());
    const QuotientMap pi = quotient_mod(Z, translation_preserving_modulus(ell));
    const auto up = all_translators(Z, X, Y);
    const auto down = all_translators(pi.target, reduce_set(pi, X), reduce_set(pi, Y));
    REQUIRE(up.empty() == down.empty());
    std::set<Vec> images;
    for (const Vec& c : up) images.insert(pi.apply(c));
    REQUIRE(images.size() == up.size());
    for (const Vec& c : images) REQUIRE(std::find(down.begin(), down.end(), c) != down.end());
  }
}

TEST_CASE("witness: rf_quotient") {
  CHECK(rf_quotient(AbelianGroup(1), {6}).modulus == 4);
  CHECK(rf_quotient(AbelianGroup(1), {1}).modulus == 2);
  CHECK(rf_quotient(AbelianGroup(1, {2}), {0, 1}).modulus == 1);
  for (Int r = 1; r <= 200; ++r) {
    Int m = 2;
    while (r % m == 0) ++m;
    REQUIRE(rf_quotient(AbelianGroup(1), {r}).modulus == m);
    REQUIRE(rf_quotient(AbelianGroup(1), {-r}).modulus == m);
  }
}

TEST_CASE("witness: examples") {
  const WreathGroup L = laurent_wreath_group(2);
  const FamilyPair fam = family_lamplighter(2, 1);
  const WreathElement f = to_wreath(L, fam.f), g = to_wreath(L, fam.g);
  const WitnessQuotient qa = witness_acting_quotient(L, f, g);
  REQUIRE(qa.acting_map.has_value());
  const WreathGroup target(L.base(), qa.acting_map->target);
  CHECK(target == qa.target);
  CHECK_FALSE(target.conjugate_test(witness_image(qa, f), witness_image(qa, g)).has_value());
  CHECK(witness_separates(full_witness(L, f, g), f, g));

  const WitnessQuotient q01 = full_witness(L, L.acting_element({1}), L.acting_element({2}));
  CHECK(q01.abelian_target);
  CHECK(q01.acting_modulus() == 2);
  CHECK(q01.kind == CertificateKind::ActingElement);

  const FamilyPair zf = family_zwrz(2);
  const WreathGroup Z = laurent_wreath_group(0);
  const WreathElement zf1 = to_wreath(Z, zf.f), zf2 = to_wreath(Z, zf.g);
  const WitnessQuotient qz = full_witness(Z, zf1, zf2);
  CHECK(qz.target.is_finite());
  CHECK(witness_separates(qz, zf1, zf2));

  const WreathGroup Z2(AbelianGroup(1), AbelianGroup(0, {2}));
  const WreathElement a3 = Z2.make({{{0}, {3}}}, {0}), a5 = Z2.make({{{0}, {5}}}, {0});
  const WitnessQuotient qb = witness_base_quotient(Z2, a3, a5);
  REQUIRE(qb.base_map.has_value());
  CHECK(2 % qb.base_modulus() != 0);
  CHECK(witness_separates(qb, a3, a5));

  const WreathElement s1 = Z2.make({{{0}, {1}}}, {0}), s2 = Z2.make({{{0}, {1}}, {{1}, {1}}}, {0});
  const WitnessQuotient qs = witness_base_quotient(Z2, s1, s2);
  CHECK(qs.kind == CertificateKind::SupportSize);
  CHECK(witness_separates(qs, s1, s2));

  CHECK_THROWS_AS(full_witness(L, f, f), std::invalid_argument);
}

TEST_CASE("witness: soundness on random nonconjugate pairs") {
  const std::vector<WreathGroup> groups = {laurent_wreath_group(2), laurent_wreath_group(0),
                                           WreathGroup(AbelianGroup(0, {4}), AbelianGroup(1, {2})),
                                           WreathGroup(AbelianGroup(1), AbelianGroup(0, {3})),
                                           WreathGroup(AbelianGroup(0, {2}), AbelianGroup(2))};
  int separated = 0;
  for (int i = 0; i < 1500; ++i) {
    const WreathGroup& W = groups[i % groups.size()];
    const WreathElement x = random_element(W, 3, 3), y = random_element(W, 3, 3);
    if (W.conjugate_test(x, y)) continue;
    const WitnessQuotient q = full_witness(W, x, y);
    REQUIRE(q.abelian_target ? q.abelian_group.is_finite() : q.target.is_finite());
    REQUIRE(witness_separates(q, x, y));
    ++separated;
  }
  CHECK(separated > 1000);
}

TEST_CASE("witness: classification in finite groups") {
  const WreathGroup V(AbelianGroup(0, {2}), AbelianGroup(0, {2}));
  CHECK(classify_nonconjugacy(V, V.make({{{0}, {1}}}, {0}), V.make({{{0}, {1}}, {{1}, {1}}}, {0})) ==
        CertificateKind::SupportSize);
  const WreathGroup C3(AbelianGroup(0, {3}), AbelianGroup(0, {3}));
  CHECK(classify_nonconjugacy(C3, C3.make({{{0}, {1}}}, {0}), C3.make({{{0}, {2}}}, {0})) ==
        CertificateKind::ValueMismatch);
  const WreathGroup C4(AbelianGroup(0, {2}), AbelianGroup(0, {4}));
  CHECK(classify_nonconjugacy(C4, C4.make({{{0}, {1}}, {{1}, {1}}}, {0}), C4.make({{{0}, {1}}, {{2}, {1}}}, {0})) ==
        CertificateKind::NonTranslate);
  CHECK(classify_nonconjugacy(C4, C4.acting_element({1}), C4.acting_element({2})) ==
        CertificateKind::ActingElement);
  CHECK(to_string(CertificateKind::NonTranslate) == "non-translate");
}
