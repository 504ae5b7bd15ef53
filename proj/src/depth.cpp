#include "wcs/depth.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <deque>
#include <exception>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "wcs/errors.hpp"

namespace wcs {

namespace {

std::optional<std::uint64_t> checked_pow(std::uint64_t base, std::uint64_t e) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < e; ++i)
    if (__builtin_mul_overflow(r, base, &r)) return std::nullopt;
  return r;
}

std::optional<std::uint64_t> checked_times(std::optional<std::uint64_t> a, std::uint64_t b) {
  std::uint64_t r;
  if (!a || __builtin_mul_overflow(*a, b, &r)) return std::nullopt;
  return r;
}

LaurentPoly poly_from_residue(Ring r, const Vec& v) {
  LaurentPoly P = poly_zero(r);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) P = poly_add(P, poly_monomial(r, v[i], static_cast<Int>(i)));
  return P;
}

/// Canonical residue representatives of R[x^+-1]/J.
std::vector<Vec> all_residues(const SplitSubgroup& N) {
  Vec bounds;
  if (N.ring != 0) {
    bounds.assign(N.gen.size() - 1, N.ring);
  } else {
    for (std::size_t j = 0; j < N.hnf.size(); ++j) bounds.push_back(N.hnf[j][j]);
  }
  std::vector<Vec> out;
  Vec cur(bounds.size(), 0);
  while (true) {
    out.push_back(cur);
    std::size_t i = 0;
    while (i < cur.size() && cur[i] + 1 == bounds[i]) cur[i++] = 0;
    if (i == cur.size()) break;
    ++cur[i];
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

void verify_family(const FamilyPair& fam) {
  if (same_conjugacy_class(fam.f, fam.g)) throw ContractViolation("family pair is conjugate");
  const WreathGroup W = laurent_wreath_group(fam.ring);
  if (W.conjugate_test(to_wreath(W, fam.f), to_wreath(W, fam.g)))
    throw ContractViolation("family pair is conjugate in the wreath model");
}

void fill_lengths(FamilyPair& fam) {
  const WreathGroup W = laurent_wreath_group(fam.ring);
  fam.length_f = W.word_length(to_wreath(W, fam.f));
  fam.length_g = W.word_length(to_wreath(W, fam.g));
}

}  // namespace

FamilyPair family_lamplighter(Int p, int i) {
  if (i < 1) throw std::invalid_argument("family index must be >= 1");
  const Int q = primitive_root_primes(p, static_cast<std::size_t>(i)).back();
  FamilyPair fam;
  fam.tag = "lamplighter";
  fam.ring = p;
  fam.i = i;
  fam.q = q;
  const LaurentPoly xq1 = x_pow_minus_one(p, q);
  fam.f = {xq1, q};
  fam.g = {poly_add(x_pow_minus_one(p, 1), xq1), q};
  verify_family(fam);
  fill_lengths(fam);
  fam.bound_lower = checked_pow(p, q);
  fam.bound_upper = checked_times(checked_pow(p, q - 1), q);
  return fam;
}

FamilyPair family_zwrz(int i) {
  if (i < 2) throw std::invalid_argument("integer family needs index >= 2 (q = 2 gives k = 0)");
  Int q = 1;
  for (int found = 0; found < i;)
    if (is_prime(++q)) ++found;
  Int alpha = 1;
  for (Int j = 2; j < q; ++j) alpha = lcm(alpha, j);
  Int k = 0;
  while ((Int{1} << k) < alpha) ++k;
  if (k == 0) throw std::invalid_argument("degenerate family index (k = 0)");
  const Int two_k = Int{1} << k;
  FamilyPair fam;
  fam.tag = "z-wr-z";
  fam.ring = 0;
  fam.i = i;
  fam.q = q;
  fam.alpha = alpha;
  fam.k = k;
  const LaurentPoly base = poly_scale(x_pow_minus_one(0, two_k), alpha);
  fam.f = {base, two_k};
  fam.g = {poly_add(base, poly_scale(x_pow_minus_one(0, two_k / 2), alpha)), two_k};
  verify_family(fam);
  fill_lengths(fam);
  fam.bound_lower = checked_pow(q, two_k);
  fam.bound_upper = checked_times(fam.bound_lower, two_k);
  return fam;
}

SplitSubgroup zwrz_literal_subgroup(const FamilyPair& fam) {
  const Int two_k = Int{1} << fam.k;
  return make_z_subgroup(fam.q, two_k, {poly_monomial(0, two_k, 0)});
}

SplitSubgroup zwrz_corrected_subgroup(const FamilyPair& fam) {
  const Int two_k = Int{1} << fam.k;
  return make_z_subgroup(two_k, two_k, {poly_monomial(0, fam.q, 0)});
}

DepthResult split_conjugacy_depth(const SemidirectElement& g1, const SemidirectElement& g2, std::uint64_t budget,
                                  const std::vector<SplitSubgroup>& sorted) {
  if (g1.P.ring != g2.P.ring) throw std::invalid_argument("elements over different rings");
  if (same_conjugacy_class(g1, g2)) throw std::invalid_argument("elements are conjugate");
  DepthResult res;
  res.g1 = g1;
  res.g2 = g2;
  res.budget = budget;
  for (const SplitSubgroup& N : sorted) {
    if (N.index() > budget) break;
    if (N.ring != g1.P.ring) throw std::invalid_argument("subgroup list is over a different ring");
    ++res.candidates_checked;
    if (!conjugate_in_split_quotient(g1, g2, N)) {
      res.found = true;
      res.split_depth = N.index();
      res.subgroup = N;
      return res;
    }
  }
  return res;
}

DepthResult split_conjugacy_depth(const SemidirectElement& g1, const SemidirectElement& g2, std::uint64_t budget) {
  return split_conjugacy_depth(g1, g2, budget, enumerate_split_subgroups(g1.P.ring, budget, 1u << 24));
}

bool brute_force_split_conjugate(const SemidirectElement& g1, const SemidirectElement& g2, const SplitSubgroup& N) {
  if (!is_normal(N)) throw std::invalid_argument("subgroup is not normal");
  if (floor_mod(g1.m - g2.m, N.t) != 0) return false;
  const Vec target = ideal_residue(N, g2.P);
  for (const Vec& q : all_residues(N)) {
    const LaurentPoly Q = poly_from_residue(N.ring, q);
    const LaurentPoly moved = poly_sub(Q, poly_shift(Q, g1.m));
    for (Int ell = 0; ell < N.t; ++ell)
      if (ideal_residue(N, poly_add(moved, poly_shift(g1.P, ell))) == target) return true;
  }
  return false;
}

std::string class_key(const SemidirectElement& g) {
  std::ostringstream os;
  os << ring_name(g.P.ring) << "|" << g.m << "|";
  if (g.m == 0) {
    if (g.P.is_zero()) return os.str() + "0";
    const Int lo = g.P.min_exp();
    for (Int e = lo; e <= g.P.max_exp(); ++e) os << g.P.coeff(e) << ",";
    return os.str();
  }
  const Int n = g.m < 0 ? -g.m : g.m;
  Vec folded(n, 0);
  for (auto [e, c] : g.P.coeffs) {
    Int& slot = folded[floor_mod(e, n)];
    slot += c;
    if (g.P.ring != 0) slot = floor_mod(slot, g.P.ring);
  }
  Vec best = folded;
  for (Int l = 1; l < n; ++l) {
    Vec r(n);
    for (Int i = 0; i < n; ++i) r[(i + l) % n] = folded[i];
    best = std::min(best, r);
  }
  os << format_vec(best);
  return os.str();
}

std::vector<std::pair<WreathElement, Int>> ball_elements(const WreathGroup& W, Int n, std::uint64_t ceiling) {
  const AbelianGroup& A = W.base();
  const AbelianGroup& B = W.acting();
  std::vector<WreathElement> gens;
  for (std::size_t i = 0; i < B.dim(); ++i) {
    gens.push_back(W.acting_element(B.gen(i)));
    gens.push_back(W.acting_element(B.neg(B.gen(i))));
  }
  for (std::size_t i = 0; i < A.dim(); ++i) {
    gens.push_back(W.make({{B.zero(), A.gen(i)}}, B.zero()));
    gens.push_back(W.make({{B.zero(), A.neg(A.gen(i))}}, B.zero()));
  }
  std::map<WreathElement, Int> dist{{W.identity(), 0}};
  std::vector<std::pair<WreathElement, Int>> out{{W.identity(), 0}};
  std::size_t head = 0;
  while (head < out.size()) {
    const auto [g, d] = out[head++];
    if (d == n) continue;
    for (const WreathElement& s : gens) {
      WreathElement h = W.multiply(g, s);
      if (dist.emplace(h, d + 1).second) {
        out.emplace_back(std::move(h), d + 1);
        if (out.size() > ceiling) throw BudgetExceeded("ball exceeds " + std::to_string(ceiling) + " elements");
      }
    }
  }
  return out;
}

std::vector<SweepRow> depth_sweep(Ring r, Int n_max, const SweepOptions& opt) {
  if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
  if (opt.jobs < 1) throw std::invalid_argument("jobs must be >= 1");
  const WreathGroup W = laurent_wreath_group(r);
  struct ClassRep {
    SemidirectElement g;
    Int len;
  };
  std::vector<ClassRep> classes;
  std::map<std::string, std::size_t> seen;
  for (const auto& [e, d] : ball_elements(W, n_max, opt.ball_ceiling)) {
    SemidirectElement s = from_wreath(W, e);
    if (seen.emplace(class_key(s), classes.size()).second) classes.push_back({s, d});
  }
  const std::vector<SplitSubgroup> subgroups = enumerate_split_subgroups(r, opt.budget, opt.z_ceiling);

  std::vector<SweepRow> rows;
  std::optional<std::pair<std::size_t, std::size_t>> best_pair;
  std::optional<DepthResult> best;
  bool exceeded = false;
  std::uint64_t total_pairs = 0;
  for (Int n = 0; n <= n_max; ++n) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::pair<std::size_t, std::size_t>> fresh;
    for (std::size_t j = 0; j < classes.size(); ++j)
      for (std::size_t i = 0; i < j; ++i)
        if (std::max(classes[i].len, classes[j].len) == n) fresh.emplace_back(i, j);
    std::vector<DepthResult> results(fresh.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
      try {
        for (std::size_t k; (k = next.fetch_add(1)) < fresh.size();)
          results[k] = split_conjugacy_depth(classes[fresh[k].first].g, classes[fresh[k].second].g, opt.budget,
                                             subgroups);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < opt.jobs; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);

    for (std::size_t k = 0; k < fresh.size(); ++k) {
      if (!results[k].found) {
        exceeded = true;
        continue;
      }
      if (!best || results[k].split_depth > best->split_depth) {
        best = results[k];
        best_pair = fresh[k];
      }
    }
    total_pairs += fresh.size();
    SweepRow row;
    row.n = n;
    row.pairs = total_pairs;
    row.exceeded = exceeded;
    if (best) {
      row.max_depth = best->split_depth;
      row.witness_pair = to_string(best->g1) + " | " + to_string(best->g2);
      row.subgroup = best->subgroup->describe();
      // The witness quotient separates, and no smaller split quotient does.
      bool ok = !brute_force_split_conjugate(best->g1, best->g2, *best->subgroup);
      for (const SplitSubgroup& N : subgroups) {
        if (!ok || N.index() >= best->split_depth) break;
        ok = brute_force_split_conjugate(best->g1, best->g2, N);
      }
      row.reverified = ok;
    } else {
      row.reverified = true;
    }
    row.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows, bool timing) {
  std::ostringstream os;
  os << "n,max_split_depth,witness_pair_id,subgroup_descriptor,elapsed_ms\n";
  for (const SweepRow& r : rows) {
    os << r.n << ",";
    if (r.exceeded)
      os << "exceeds-budget";
    else
      os << r.max_depth;
    os << "," << csv_field(r.witness_pair) << "," << csv_field(r.subgroup) << ",";
    if (timing) {
      os << static_cast<std::uint64_t>(r.elapsed_ms + 0.5);
    } else {
      os << 0;
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace wcs
