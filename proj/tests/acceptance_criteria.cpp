#include "acceptance_criteria.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "oracles.hpp"
#include "wcs/depth.hpp"
#include "wcs/laurent.hpp"
#include "wcs/lattice.hpp"
#include "wcs/witness.hpp"
#include "wcs/wreath.hpp"

namespace acceptance {

using namespace wcs;

namespace {

std::string str(std::uint64_t v) { return std::to_string(v); }

/// First index at which the oracle stream separates the pair, or 0.
std::uint64_t oracle_fp_depth(const SemidirectElement& f, const SemidirectElement& g, Int p, std::uint64_t budget) {
  for (const auto& s : oracle::fp_split_subgroups(p, budget))
    if (!oracle::fp_quotient_conjugate(f, g, p, s.t, s.P)) return s.index;
  return 0;
}

Vec to_dense_vec(const Dense& d) { return Vec(d.begin(), d.end()); }

WreathElement base_gen(const WreathGroup& W) {
  return W.make({{W.acting().zero(), W.base().gen(0)}}, W.acting().zero());
}

/// Random word of `len` letters over {a^+-1 at 0} and {e_i^+-1}.
WreathElement random_word(const WreathGroup& W, int len, std::mt19937_64& rng) {
  std::vector<WreathElement> gens;
  const WreathElement a = base_gen(W);
  gens.push_back(a);
  gens.push_back(W.inverse(a));
  for (std::size_t i = 0; i < W.acting().dim(); ++i) {
    const WreathElement t = W.acting_element(W.acting().gen(i));
    gens.push_back(t);
    gens.push_back(W.inverse(t));
  }
  WreathElement g = W.identity();
  std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
  for (int i = 0; i < len; ++i) g = W.multiply(g, gens[pick(rng)]);
  return g;
}

Int max_abs(const Vec& v) {
  Int m = 0;
  for (Int x : v) m = std::max(m, x < 0 ? -x : x);
  return m;
}

/// Every b in Z^k with 0 < |b|_1 <= n.
std::vector<Vec> vectors_in_l1_ball(std::size_t k, Int n) {
  std::vector<Vec> out;
  Vec cur(k, -n);
  while (true) {
    if (norm1(cur) <= n && norm1(cur) > 0) out.push_back(cur);
    std::size_t i = 0;
    while (i < k && cur[i] == n) cur[i++] = -n;
    if (i == k) break;
    ++cur[i];
  }
  return out;
}

}  // namespace

CriterionResult lamplighter_bounds(const Options&) {
  CriterionResult r{1, true, ""};
  std::ostringstream os;
  for (int i : {1, 2}) {
    const FamilyPair fam = family_lamplighter(2, i);
    const std::uint64_t lo = fam.bound_lower.value(), hi = fam.bound_upper.value();
    const DepthResult d = split_conjugacy_depth(fam.f, fam.g, hi);
    const std::uint64_t oracle_depth = oracle_fp_depth(fam.f, fam.g, 2, hi);
    const bool ok = d.found && lo <= d.split_depth && d.split_depth <= hi && d.split_depth == oracle_depth;
    r.pass = r.pass && ok;
    os << "q=" << fam.q << " bounds [" << lo << "," << hi << "] split_depth="
       << (d.found ? str(d.split_depth) : "exceeds-budget") << " oracle=" << oracle_depth << " via "
       << (d.subgroup ? d.subgroup->describe() : "-") << "; ";
  }
  r.detail = os.str();
  return r;
}

CriterionResult below_bound_conjugacy(const Options&) {
  CriterionResult r{2, true, ""};
  std::ostringstream os;
  for (int i : {1, 2}) {
    const FamilyPair fam = family_lamplighter(2, i);
    const std::uint64_t lo = fam.bound_lower.value();
    std::set<std::pair<Int, Vec>> lib_set, oracle_set;
    std::uint64_t lib_sep = 0, oracle_sep = 0;
    for (const SplitSubgroup& N : enumerate_split_subgroups_fp(2, lo - 1)) {
      lib_set.insert({N.t, to_dense_vec(N.gen)});
      if (!conjugate_in_split_quotient(fam.f, fam.g, N)) ++lib_sep;
    }
    for (const auto& s : oracle::fp_split_subgroups(2, lo - 1)) {
      oracle_set.insert({s.t, s.P});
      if (!oracle::fp_quotient_conjugate(fam.f, fam.g, 2, s.t, s.P)) ++oracle_sep;
    }
    const bool ok = lib_sep == 0 && oracle_sep == 0 && lib_set == oracle_set;
    r.pass = r.pass && ok;
    os << "q=" << fam.q << ": " << lib_set.size() << " subgroups of index <" << lo << " (oracle "
       << oracle_set.size() << ", " << (lib_set == oracle_set ? "same" : "different") << " set), separating: "
       << lib_sep << " (oracle " << oracle_sep << "); ";
  }
  r.detail = os.str();
  return r;
}

CriterionResult psi_quotient(const Options&) {
  CriterionResult r{3, true, ""};
  const FamilyPair fam = family_lamplighter(2, 1);
  const Dense psi = {1, 1, 1};
  const SplitSubgroup N = make_fp_subgroup(2, fam.q, psi);
  const bool f_zero = ideal_contains(N, fam.f.P) && floor_mod(fam.f.m, N.t) == 0;
  const LaurentPoly x_minus_1 = parse_poly("x - 1", 2);
  const bool g_is_x_minus_1 = ideal_residue(N, fam.g.P) == ideal_residue(N, x_minus_1) &&
                              floor_mod(fam.g.m, N.t) == 0 && !ideal_contains(N, x_minus_1);
  const bool lib_sep = !conjugate_in_split_quotient(fam.f, fam.g, N);
  const bool brute_sep = !brute_force_split_conjugate(fam.f, fam.g, N);
  const bool oracle_sep = !oracle::fp_quotient_conjugate(fam.f, fam.g, 2, fam.q, to_dense_vec(psi));
  r.pass = N.index() == 12 && is_normal(N) && f_zero && g_is_x_minus_1 && lib_sep && brute_sep && oracle_sep;
  std::ostringstream os;
  os << N.describe() << " order " << N.index() << "; pi(f)=" << (f_zero ? "(0,0)" : "nonzero")
     << "; pi(g)=" << (g_is_x_minus_1 ? "(x-1,0)" : "other") << "; separates: library " << lib_sep
     << ", brute force " << brute_sep << ", oracle " << oracle_sep;
  r.detail = os.str();
  return r;
}

CriterionResult zwrz_instance(const Options&) {
  CriterionResult r{4, true, ""};
  std::ostringstream os;
  const FamilyPair fam = family_zwrz(2);
  const WreathGroup W = laurent_wreath_group(0);
  const bool laurent_nc = !same_conjugacy_class(fam.f, fam.g).has_value();
  const bool wreath_nc = !W.conjugate_test(to_wreath(W, fam.f), to_wreath(W, fam.g)).has_value();
  os << "f=" << to_string(fam.f) << " g=" << to_string(fam.g) << "; nonconjugate: laurent " << laurent_nc
     << ", wreath " << wreath_nc << "; ";

  const SplitSubgroup H = zwrz_literal_subgroup(fam);
  const Int two_k = Int{1} << fam.k;
  std::uint64_t displayed = static_cast<std::uint64_t>(two_k);
  for (Int i = 0; i < two_k; ++i) displayed *= static_cast<std::uint64_t>(fam.q);
  const bool H_normal = is_normal(H);
  // Images in the quotient by the literal H: polynomial parts modulo its ideal.
  const bool f_dies = ideal_contains(H, fam.f.P);
  const bool g_dies = ideal_contains(H, fam.g.P);
  const bool H_separates = H_normal && !conjugate_in_split_quotient(fam.f, fam.g, H);
  os << "H=" << H.describe() << " exact index " << H.index() << " vs displayed " << displayed << ", normal "
     << H_normal << ", pi_H(f)=0 " << f_dies << ", pi_H(g)=0 " << g_dies << ", H separates " << H_separates
     << "; ";

  const SplitSubgroup Hc = zwrz_corrected_subgroup(fam);
  const bool Hc_separates = is_normal(Hc) && !conjugate_in_split_quotient(fam.f, fam.g, Hc) &&
                            !brute_force_split_conjugate(fam.f, fam.g, Hc);
  os << "swapped H'=" << Hc.describe() << " index " << Hc.index() << " separates " << Hc_separates << "; ";

  const std::uint64_t bound = fam.bound_lower.value();
  std::uint64_t lib_sep = 0, lib_total = 0;
  std::string first_sep;
  for (const SplitSubgroup& N : enumerate_split_subgroups_z(bound - 1, 1u << 24)) {
    ++lib_total;
    if (!conjugate_in_split_quotient(fam.f, fam.g, N)) {
      if (first_sep.empty()) first_sep = N.describe() + " (index " + str(N.index()) + ")";
      ++lib_sep;
    }
  }
  std::uint64_t oracle_sep = 0, oracle_total = 0, oracle_first = 0;
  for (const auto& s : oracle::z_split_subgroups(bound - 1)) {
    ++oracle_total;
    if (!oracle::z_quotient_conjugate(fam.f, fam.g, s)) {
      if (oracle_first == 0) oracle_first = s.index;
      ++oracle_sep;
    }
  }
  const DepthResult d = split_conjugacy_depth(fam.f, fam.g, bound);
  os << "split quotients of index <" << bound << ": " << lib_total << " (oracle " << oracle_total
     << "), separating " << lib_sep << " (oracle " << oracle_sep << ")";
  if (!first_sep.empty()) os << ", first " << first_sep;
  os << ", split_depth=" << (d.found ? str(d.split_depth) : "exceeds-budget");

  const bool below_ok = lib_sep == 0 && oracle_sep == 0;
  const bool oracle_agrees = lib_total == oracle_total && lib_sep == oracle_sep &&
                             (d.found ? d.split_depth == oracle_first : oracle_first == 0);
  r.pass = laurent_nc && wreath_nc && H_separates && below_ok && oracle_agrees;
  r.detail = os.str();
  return r;
}

CriterionResult oracle_equivalence(const Options&) {
  CriterionResult r{5, true, ""};
  std::ostringstream os;
  const std::vector<WreathGroup> groups = {
      WreathGroup(AbelianGroup(0, {2}), AbelianGroup(0, {4})),
      WreathGroup(AbelianGroup(0, {3}), AbelianGroup(0, {3})),
      WreathGroup(AbelianGroup(0, {2}), AbelianGroup(0, {2, 2})),
  };
  for (const WreathGroup& W : groups) {
    const std::vector<WreathElement> els = W.elements();
    std::uint64_t pairs = 0, mismatches = 0, conj = 0;
    for (const WreathElement& x : els) {
      for (const WreathElement& y : els) {
        ++pairs;
        const auto fast = W.conjugate_test(x, y);
        const auto slow = W.brute_force_conjugate(x, y);
        if (fast) ++conj;
        if (fast.has_value() != slow.has_value() || (fast && !(W.conjugate(*fast, x) == y))) ++mismatches;
      }
    }
    r.pass = r.pass && mismatches == 0;
    os << W.to_string() << ": " << pairs << " pairs, " << conj << " conjugate, " << mismatches << " mismatches; ";
  }
  r.detail = os.str();
  return r;
}

CriterionResult property_suite(const Options& opt) {
  CriterionResult r{6, true, ""};
  std::ostringstream os;
  std::mt19937_64 rng(opt.seed);

  // Kernel generators: norm bound, orthogonality, saturation, and a box check.
  std::uint64_t kernel_cases = 0, kernel_fail = 0, box_points = 0;
  for (std::size_t k = 2; k <= 3; ++k) {
    for (const Vec& b : vectors_in_l1_ball(k, 20)) {
      ++kernel_cases;
      const std::vector<Vec> K = kernel_basis(b);
      bool ok = K.size() == k - 1;
      const Int bound = (Int{1} << (k - 1)) * norm1(b);
      for (const Vec& v : K) ok = ok && dot(v, b) == 0 && norm1(v) <= bound;
      // Saturation: the maximal minors of K, up to sign, equal b / gcd(b).
      if (ok && k == 2) {
        const Int g = gcd_vector(b);
        ok = (K[0][0] == b[1] / g && K[0][1] == -b[0] / g) || (K[0][0] == -b[1] / g && K[0][1] == b[0] / g);
      }
      if (ok && k == 3) {
        const Int g = gcd_vector(b);
        const Vec c = {K[0][1] * K[1][2] - K[0][2] * K[1][1], K[0][2] * K[1][0] - K[0][0] * K[1][2],
                       K[0][0] * K[1][1] - K[0][1] * K[1][0]};
        const Vec p = {b[0] / g, b[1] / g, b[2] / g};
        ok = c == p || c == Vec{-p[0], -p[1], -p[2]};
      }
      if (ok && k >= 2 && norm1(b) <= 8) {
        for (const Vec& x : vectors_in_l1_ball(k, 6)) {
          if (dot(x, b) != 0) continue;
          ++box_points;
          ok = ok && solve_in_span(K, x).has_value();
        }
      }
      if (!ok) ++kernel_fail;
    }
  }
  os << "kernel: " << kernel_cases << " vectors, " << box_points << " box points, " << kernel_fail << " failures; ";

  // Stretch factor: Bezout vector bound and unimodularity.
  std::uint64_t stretch_fail = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t k = 2 + trial % 3;
    std::uniform_int_distribution<Int> coord(-60, 60);
    Vec b(k);
    do {
      for (Int& x : b) x = coord(rng);
    } while (gcd_vector(b) != 1);
    const Vec a = ext_gcd_bounded(b);
    bool ok = dot(a, b) == 1;
    if (max_abs(b) >= 2) ok = ok && 2 * max_abs(a) <= max_abs(b);
    const UnimodularTransform U = unimodular_transform(b);
    const Int det = determinant(U.T);
    ok = ok && (det == 1 || det == -1) && mat_vec(U.T, b)[0] == 1;
    for (std::size_t i = 1; i < k; ++i) ok = ok && mat_vec(U.T, b)[i] == 0;
    if (!ok) ++stretch_fail;
  }
  os << "stretch: 1000 primitive vectors, " << stretch_fail << " failures; ";

  // Translates survive reduction mod 4l in both directions.
  std::uint64_t torus_fail = 0, torus_translates = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 1 + trial % 2;
    const AbelianGroup B(k);
    std::uniform_int_distribution<Int> small(1, 6);
    const Int ell = small(rng);
    std::uniform_int_distribution<Int> coord(-ell, ell);
    std::set<Vec> X, Y;
    // [-l, l] holds only 2l + 1 points.
    const std::size_t size = static_cast<std::size_t>(std::min<Int>(small(rng), 2 * ell + 1));
    auto random_point = [&] {
      Vec v(k);
      do {
        for (Int& x : v) x = coord(rng);
      } while (norm1(v) > ell);
      return v;
    };
    while (X.size() < size) X.insert(random_point());
    if (trial % 2 == 0) {
      // Y = c + X when that stays in the ball, else an independent set.
      const Vec c = random_point();
      bool inside = true;
      for (const Vec& x : X) {
        const Vec y = B.add(x, c);
        inside = inside && norm1(y) <= ell;
        Y.insert(y);
      }
      if (!inside) Y.clear();
    }
    while (Y.size() < size) Y.insert(random_point());
    const std::vector<Vec> Xv(X.begin(), X.end()), Yv(Y.begin(), Y.end());
    const QuotientMap pi = quotient_mod(B, translation_preserving_modulus(ell));
    std::set<Vec> PX, PY;
    for (const Vec& x : Xv) PX.insert(pi.apply(x));
    for (const Vec& y : Yv) PY.insert(pi.apply(y));
    const bool upstairs = is_translate(B, Xv, Yv).has_value();
    const bool downstairs = is_translate(pi.target, {PX.begin(), PX.end()}, {PY.begin(), PY.end()}).has_value();
    if (upstairs) ++torus_translates;
    if (upstairs != downstairs || PX.size() != X.size()) ++torus_fail;
  }
  os << "translates at 4l: 1000 instances (" << torus_translates << " translates), " << torus_fail
     << " failures; ";

  // Coset preservation on every separating_modulus call.
  std::uint64_t sep_calls = 0, sep_fail = 0;
  const std::vector<AbelianGroup> acting = {AbelianGroup(1), AbelianGroup(2), AbelianGroup(1, {2}),
                                            AbelianGroup(2, {3})};
  for (int trial = 0; trial < 300; ++trial) {
    const AbelianGroup& B = acting[trial % acting.size()];
    std::uniform_int_distribution<Int> small(-4, 4);
    Vec b(B.dim());
    do {
      for (Int& x : b) x = small(rng);
      b = B.normalize(b);
    } while (norm1(B.free_part(b)) == 0);
    std::vector<Vec> pts;
    std::uniform_int_distribution<int> count(1, 5);
    for (int j = count(rng); j > 0; --j) {
      Vec v(B.dim());
      for (Int& x : v) x = small(rng);
      pts.push_back(B.normalize(v));
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    Int ell = B.word_length(b);
    for (const Vec& p : pts) ell = std::max(ell, B.word_length(p));
    ++sep_calls;
    const Int m = separating_modulus(B, b, pts, ell);
    const QuotientMap pi = quotient_mod(B, m);
    bool ok = m >= 1;
    for (const Vec& p : pts) {
      for (const Vec& q : pts) {
        const Vec d = B.sub(p, q);
        ok = ok && (pi.apply(p) == pi.apply(q)) == (p == q);
        ok = ok && B.in_cyclic(d, b) == pi.target.in_cyclic(pi.apply(d), pi.apply(b));
      }
    }
    if (!ok) ++sep_fail;
  }
  os << "cosets: " << sep_calls << " separating_modulus calls, " << sep_fail << " failures; ";

  // Ideal identities for (x^m - 1, x^n - 1) modulo d.
  std::uint64_t ideal_cases = 0, ideal_fail = 0;
  for (Int m = 1; m <= 12; ++m) {
    for (Int n = 1; n <= 12; ++n) {
      for (Int d = 1; d <= 5; ++d) {
        ++ideal_cases;
        const ModIdealCertificate c = mod_ideal_reduce(m, n, d);
        const Int g = std::gcd(m, n);
        const LaurentPoly xg = x_pow_minus_one(0, g), xm = x_pow_minus_one(0, m), xn = x_pow_minus_one(0, n);
        bool ok = c.g == g && verify_mod_ideal(c);
        ok = ok && poly_sub(xg, poly_add(poly_mul(c.w, xm), poly_mul(c.v, xn))).is_zero();
        ok = ok && poly_sub(xm, poly_mul(c.u, xg)).is_zero();
        const SplitSubgroup J = make_z_subgroup(n, n, {poly_monomial(0, d, 0), xm});
        const SplitSubgroup Jg = make_z_subgroup(g, g, {poly_monomial(0, d, 0)});
        ok = ok && ideal_contains(J, xg) && J.quotient_size == Jg.quotient_size;
        if (!ok) ++ideal_fail;
      }
    }
  }
  os << "mod-ideal: " << ideal_cases << " certificates, " << ideal_fail << " failures";

  r.pass = kernel_fail == 0 && stretch_fail == 0 && torus_fail == 0 && sep_fail == 0 && ideal_fail == 0;
  r.detail = os.str();
  return r;
}

CriterionResult upper_bound_shape(const Options& opt) {
  CriterionResult r{7, true, ""};
  std::ostringstream os;
  std::mt19937_64 rng(opt.seed ^ 0x9e3779b97f4a7c15ULL);
  const std::vector<WreathGroup> groups = {
      laurent_wreath_group(2),
      WreathGroup(AbelianGroup(0, {4}), AbelianGroup(1, {2})),
      laurent_wreath_group(0),
  };
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const WreathGroup& W = groups[gi];
    std::uint64_t tried = 0, ok = 0, skipped = 0;
    double c = 0;
    std::uniform_int_distribution<int> len(0, 12);
    while (tried < 200) {
      const WreathElement x = random_word(W, len(rng), rng);
      const WreathElement y = random_word(W, len(rng), rng);
      if (W.conjugate_test(x, y)) {
        ++skipped;
        continue;
      }
      ++tried;
      try {
        const WitnessQuotient q = full_witness(W, x, y);
        if (!witness_separates(q, x, y)) continue;
        ++ok;
        if (gi == 0) {
          const Int n = std::max({W.word_length(x).value, W.word_length(y).value, Int{1}});
          c = std::max(c, q.log2_order / static_cast<double>(n));
        }
      } catch (const std::exception&) {
      }
    }
    r.pass = r.pass && ok == tried;
    os << W.to_string() << ": " << ok << "/" << tried << " separated";
    if (gi == 0) os << ", c=" << std::round(c * 1000) / 1000;
    os << "; ";
  }
  r.detail = os.str();
  return r;
}

CriterionResult sweep_sanity(const Options& opt) {
  CriterionResult r{8, true, ""};
  SweepOptions serial;
  serial.jobs = 1;
  SweepOptions parallel = serial;
  parallel.jobs = std::max(2u, opt.jobs);
  const auto rows1 = depth_sweep(2, 6, serial);
  const auto rows2 = depth_sweep(2, 6, parallel);
  const bool deterministic = sweep_csv(rows1, false) == sweep_csv(rows2, false);
  bool monotone = true, witnessed = true;
  std::ostringstream os;
  os << "max split depth by n:";
  for (std::size_t i = 0; i < rows1.size(); ++i) {
    const SweepRow& row = rows1[i];
    if (i > 0 && row.max_depth < rows1[i - 1].max_depth) monotone = false;
    if (row.exceeded) witnessed = false;
    if (row.max_depth > 0 && (!row.reverified || row.witness_pair.empty() || row.subgroup.empty())) witnessed = false;
    os << " " << row.max_depth;
  }
  r.pass = rows1.size() == 7 && deterministic && monotone && witnessed;
  os << "; jobs 1 vs " << parallel.jobs << " identical " << deterministic << ", monotone " << monotone
     << ", re-verified " << witnessed;
  r.detail = os.str();
  return r;
}

std::vector<CriterionResult> run_all(const Options& opt, const std::function<void(const CriterionResult&)>& report) {
  using Fn = CriterionResult (*)(const Options&);
  const Fn fns[] = {lamplighter_bounds, below_bound_conjugacy, psi_quotient, zwrz_instance,
                    oracle_equivalence, property_suite,           upper_bound_shape, sweep_sanity};
  std::vector<CriterionResult> out;
  int id = 1;
  for (Fn fn : fns) {
    CriterionResult res;
    try {
      res = fn(opt);
    } catch (const std::exception& e) {
      res = {id, false, std::string("exception: ") + e.what()};
    }
    ++id;
    if (report) report(res);
    out.push_back(res);
  }
  return out;
}

std::string format_line(const CriterionResult& r) {
  return std::string(r.pass ? "PASS " : "FAIL ") + std::to_string(r.id) + ": " + r.detail;
}

}  // namespace acceptance
