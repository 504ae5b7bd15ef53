#pragma once

// Conjugacy depth over split quotients (J x| tZ) of R wr Z, the two witness
// families, and empirical sweeps over word-metric balls.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wcs/laurent.hpp"
#include "wcs/wreath.hpp"

namespace wcs {

struct FamilyPair {
  std::string tag;  // "lamplighter" or "z-wr-z"
  Ring ring = 0;
  int i = 0;
  Int q = 0;
  Int alpha = 0, k = 0;  // z-wr-z only
  SemidirectElement f, g;
  WordLength length_f, length_g;
  std::optional<std::uint64_t> bound_lower, bound_upper;  // empty on overflow
};

/// q = i-th prime above p with p primitive mod q; f = (x^q - 1, q),
/// g = (x - 1 + x^q - 1, q); bounds p^q and q p^{q-1}.
FamilyPair family_lamplighter(Int p, int i);
/// q = i-th prime (i >= 2), alpha = lcm(1..q-1), 2^k least power >= alpha;
/// f = (alpha (x^{2^k} - 1), 2^k), g = f + alpha (x^{2^{k-1}} - 1);
/// bounds q^{2^k} and 2^k q^{2^k}.
FamilyPair family_zwrz(int i);

/// The subgroup (2^k, x^{2^k} - 1) x| qZ exactly as written for the integer
/// family; it is not normal.
SplitSubgroup zwrz_literal_subgroup(const FamilyPair& fam);
/// (q, x^{2^k} - 1) x| 2^k Z: normal, of index 2^k q^{2^k}, and separating.
SplitSubgroup zwrz_corrected_subgroup(const FamilyPair& fam);

struct DepthResult {
  SemidirectElement g1, g2;
  bool found = false;
  std::uint64_t split_depth = 0;  // valid when found
  std::optional<SplitSubgroup> subgroup;
  std::uint64_t budget = 0;
  std::uint64_t candidates_checked = 0;
};

/// First split subgroup (nondecreasing index) whose quotient separates the
/// classes of g1 and g2. `sorted` must be the enumeration for the ring, sorted
/// by index and covering at least `budget`.
DepthResult split_conjugacy_depth(const SemidirectElement& g1, const SemidirectElement& g2, std::uint64_t budget,
                                  const std::vector<SplitSubgroup>& sorted);
DepthResult split_conjugacy_depth(const SemidirectElement& g1, const SemidirectElement& g2, std::uint64_t budget);

/// Exhaustive search for a conjugator in (R[x^+-1]/J) x| Z/t.
bool brute_force_split_conjugate(const SemidirectElement& g1, const SemidirectElement& g2, const SplitSubgroup& N);

/// Canonical label of the conjugacy class of g.
std::string class_key(const SemidirectElement& g);

/// Every element of word length <= n (generators: a at 0 and t), with its
/// length, in BFS order. Throws BudgetExceeded above `ceiling` elements.
std::vector<std::pair<WreathElement, Int>> ball_elements(const WreathGroup& W, Int n, std::uint64_t ceiling = 1000000);

struct SweepRow {
  Int n = 0;
  std::uint64_t pairs = 0;
  bool exceeded = false;      // some pair was not separated within budget
  std::uint64_t max_depth = 0;
  std::string witness_pair;   // "g1 | g2"
  std::string subgroup;       // descriptor of the separating subgroup
  bool reverified = false;    // brute-force conjugacy in the quotient agrees
  double elapsed_ms = 0;
};

struct SweepOptions {
  std::uint64_t budget = 4096;
  unsigned jobs = 1;
  std::uint64_t ball_ceiling = 1000000;
  std::uint64_t z_ceiling = 1u << 24;
};

std::vector<SweepRow> depth_sweep(Ring r, Int n_max, const SweepOptions& opt = {});
/// CSV with header n,max_split_depth,witness_pair_id,subgroup_descriptor,elapsed_ms.
std::string sweep_csv(const std::vector<SweepRow>& rows, bool timing = true);

}  // namespace wcs
