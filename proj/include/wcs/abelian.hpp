#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wcs {

using Int = std::int64_t;
using Vec = std::vector<Int>;

Int gcd_vector(const Vec& v);
Int lcm(Int a, Int b);
Int floor_mod(Int a, Int m);
Int norm1(const Vec& v);

/// Z^k (+) Z/n_1 (+) ... (+) Z/n_r. Elements are coordinate vectors of length
/// k + r; torsion coordinates are kept in [0, n_i). Torsion orders are stored
/// as given, so group equality is structural.
class AbelianGroup {
 public:
  AbelianGroup() = default;
  AbelianGroup(int free_rank, std::vector<Int> torsion = {});

  int free_rank() const { return free_rank_; }
  const std::vector<Int>& torsion() const { return torsion_; }
  std::size_t dim() const { return free_rank_ + torsion_.size(); }
  Int exponent() const;
  bool is_finite() const { return free_rank_ == 0; }
  /// Order of a finite group; empty when infinite or above 2^62.
  std::optional<std::uint64_t> order() const;
  double log2_order() const;

  Vec zero() const { return Vec(dim(), 0); }
  Vec gen(std::size_t i) const;
  Vec normalize(Vec x) const;
  void check(const Vec& x) const;
  bool contains(const Vec& x) const;

  Vec add(const Vec& x, const Vec& y) const;
  Vec sub(const Vec& x, const Vec& y) const;
  Vec neg(const Vec& x) const;
  Vec scale(Int c, const Vec& x) const;
  bool is_zero(const Vec& x) const;

  Vec free_part(const Vec& x) const;
  Vec torsion_part(const Vec& x) const;
  Int word_length(const Vec& x) const;

  /// Order of x, or empty when x has infinite order.
  std::optional<Int> element_order(const Vec& x) const;
  /// Some j with j*b = s, or empty when s is not in <b>. For b of finite
  /// order the returned j lies in [0, ord(b)).
  std::optional<Int> cyclic_index(const Vec& s, const Vec& b) const;
  bool in_cyclic(const Vec& s, const Vec& b) const { return cyclic_index(s, b).has_value(); }

  /// All elements of a finite group in lexicographic order.
  std::vector<Vec> elements(std::uint64_t limit = 1u << 22) const;
  /// All elements with word length <= n.
  std::vector<Vec> ball(Int n) const;

  std::string to_string() const;
  static AbelianGroup parse(const std::string& text);

  bool operator==(const AbelianGroup&) const = default;

 private:
  int free_rank_ = 0;
  std::vector<Int> torsion_;
};

/// Reduction mod m on every free coordinate, identity on torsion.
struct QuotientMap {
  AbelianGroup source;
  Int modulus = 1;
  AbelianGroup target;

  Vec apply(const Vec& x) const;
};

QuotientMap quotient_mod(const AbelianGroup& B, Int m);

std::string format_vec(const Vec& v);
Vec parse_vec(const std::string& text);

}  // namespace wcs
