#include "wcs/abelian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <regex>
#include <sstream>

#include "wcs/errors.hpp"

namespace wcs {

Int gcd_vector(const Vec& v) {
  Int g = 0;
  for (Int x : v) g = std::gcd(g, x);
  return g;
}

Int lcm(Int a, Int b) {
  if (a == 0 || b == 0) return 0;
  return std::lcm(a, b);
}

Int floor_mod(Int a, Int m) {
  Int r = a % m;
  return r < 0 ? r + m : r;
}

Int norm1(const Vec& v) {
  Int s = 0;
  for (Int x : v) s += x < 0 ? -x : x;
  return s;
}

AbelianGroup::AbelianGroup(int free_rank, std::vector<Int> torsion)
    : free_rank_(free_rank), torsion_(std::move(torsion)) {
  if (free_rank_ < 0) throw std::invalid_argument("negative free rank");
  for (Int n : torsion_)
    if (n < 2) throw std::invalid_argument("torsion order must be >= 2");
}

Int AbelianGroup::exponent() const {
  Int e = 1;
  for (Int n : torsion_) e = lcm(e, n);
  return e;
}

std::optional<std::uint64_t> AbelianGroup::order() const {
  if (free_rank_ > 0) return std::nullopt;
  std::uint64_t o = 1;
  for (Int n : torsion_) {
    if (o > (std::uint64_t{1} << 62) / static_cast<std::uint64_t>(n)) return std::nullopt;
    o *= static_cast<std::uint64_t>(n);
  }
  return o;
}

double AbelianGroup::log2_order() const {
  if (free_rank_ > 0) return INFINITY;
  double s = 0;
  for (Int n : torsion_) s += std::log2(static_cast<double>(n));
  return s;
}

Vec AbelianGroup::gen(std::size_t i) const {
  Vec v = zero();
  v.at(i) = 1;
  return v;
}

Vec AbelianGroup::normalize(Vec x) const {
  check(x);
  for (std::size_t i = 0; i < torsion_.size(); ++i) {
    Int& c = x[free_rank_ + i];
    c = floor_mod(c, torsion_[i]);
  }
  return x;
}

void AbelianGroup::check(const Vec& x) const {
  if (x.size() != dim())
    throw std::invalid_argument("element " + format_vec(x) + " has wrong length for " + to_string());
}

bool AbelianGroup::contains(const Vec& x) const {
  if (x.size() != dim()) return false;
  for (std::size_t i = 0; i < torsion_.size(); ++i) {
    Int c = x[free_rank_ + i];
    if (c < 0 || c >= torsion_[i]) return false;
  }
  return true;
}

Vec AbelianGroup::add(const Vec& x, const Vec& y) const {
  check(x);
  check(y);
  Vec r(dim());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = x[i] + y[i];
  return normalize(std::move(r));
}

Vec AbelianGroup::sub(const Vec& x, const Vec& y) const {
  check(x);
  check(y);
  Vec r(dim());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = x[i] - y[i];
  return normalize(std::move(r));
}

Vec AbelianGroup::neg(const Vec& x) const { return scale(-1, x); }

Vec AbelianGroup::scale(Int c, const Vec& x) const {
  check(x);
  Vec r(dim());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = c * x[i];
  return normalize(std::move(r));
}

bool AbelianGroup::is_zero(const Vec& x) const {
  return std::all_of(x.begin(), x.end(), [](Int c) { return c == 0; });
}

Vec AbelianGroup::free_part(const Vec& x) const {
  check(x);
  return Vec(x.begin(), x.begin() + free_rank_);
}

Vec AbelianGroup::torsion_part(const Vec& x) const {
  check(x);
  return Vec(x.begin() + free_rank_, x.end());
}

Int AbelianGroup::word_length(const Vec& x) const {
  check(x);
  Int s = 0;
  for (int i = 0; i < free_rank_; ++i) s += std::abs(x[i]);
  for (std::size_t i = 0; i < torsion_.size(); ++i) {
    Int c = floor_mod(x[free_rank_ + i], torsion_[i]);
    s += std::min(c, torsion_[i] - c);
  }
  return s;
}

std::optional<Int> AbelianGroup::element_order(const Vec& x) const {
  check(x);
  for (int i = 0; i < free_rank_; ++i)
    if (x[i] != 0) return std::nullopt;
  Int o = 1;
  for (std::size_t i = 0; i < torsion_.size(); ++i) {
    Int n = torsion_[i];
    Int c = floor_mod(x[free_rank_ + i], n);
    o = lcm(o, n / std::gcd(c, n));
  }
  return o;
}

std::optional<Int> AbelianGroup::cyclic_index(const Vec& s, const Vec& b) const {
  check(s);
  check(b);
  int pivot = -1;
  for (int i = 0; i < free_rank_; ++i)
    if (b[i] != 0) {
      pivot = i;
      break;
    }
  if (pivot >= 0) {
    if (s[pivot] % b[pivot] != 0) return std::nullopt;
    Int j = s[pivot] / b[pivot];
    if (sub(s, scale(j, b)) == zero()) return j;
    return std::nullopt;
  }
  for (int i = 0; i < free_rank_; ++i)
    if (s[i] != 0) return std::nullopt;
  Int ord = *element_order(b);
  Vec sn = normalize(s);
  Vec acc = zero();
  for (Int j = 0; j < ord; ++j) {
    if (acc == sn) return j;
    acc = add(acc, b);
  }
  return std::nullopt;
}

std::vector<Vec> AbelianGroup::elements(std::uint64_t limit) const {
  auto o = order();
  if (!o) throw std::invalid_argument("elements() on infinite group " + to_string());
  if (*o > limit) throw BudgetExceeded("group " + to_string() + " too large to enumerate");
  std::vector<Vec> out;
  out.reserve(*o);
  Vec cur = zero();
  while (true) {
    out.push_back(cur);
    int i = static_cast<int>(torsion_.size()) - 1;
    while (i >= 0) {
      if (++cur[i] < torsion_[i]) break;
      cur[i] = 0;
      --i;
    }
    if (i < 0) break;
  }
  return out;
}

std::vector<Vec> AbelianGroup::ball(Int n) const {
  std::vector<Vec> out;
  Vec cur(dim(), 0);
  // Depth-first over coordinates with remaining budget.
  auto rec = [&](auto&& self, std::size_t i, Int budget) -> void {
    if (i == dim()) {
      out.push_back(cur);
      return;
    }
    if (static_cast<int>(i) < free_rank_) {
      for (Int c = -budget; c <= budget; ++c) {
        cur[i] = c;
        self(self, i + 1, budget - std::abs(c));
      }
    } else {
      Int ord = torsion_[i - free_rank_];
      for (Int c = 0; c < ord; ++c) {
        Int cost = std::min(c, ord - c);
        if (cost > budget) continue;
        cur[i] = c;
        self(self, i + 1, budget - cost);
      }
    }
    cur[i] = 0;
  };
  if (n >= 0) rec(rec, 0, n);
  std::sort(out.begin(), out.end());
  return out;
}

std::string AbelianGroup::to_string() const {
  std::vector<std::string> parts;
  if (free_rank_ == 1) parts.push_back("Z");
  if (free_rank_ > 1) parts.push_back("Z^" + std::to_string(free_rank_));
  for (Int n : torsion_) parts.push_back("Z/" + std::to_string(n));
  if (parts.empty()) return "1";
  std::string s = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) s += " x " + parts[i];
  return s;
}

AbelianGroup AbelianGroup::parse(const std::string& text) {
  static const std::regex sep(R"(\s+x\s+)");
  static const std::regex free_re(R"(Z(?:\^(\d+))?)");
  static const std::regex tor_re(R"((?:Z/|F)(\d+))");
  std::string t = std::regex_replace(text, std::regex(R"(^\s+|\s+$)"), "");
  if (t.empty()) throw ParseError("empty group descriptor");
  int k = 0;
  std::vector<Int> tor;
  if (t == "1" || t == "0") return AbelianGroup(0, {});
  std::sregex_token_iterator it(t.begin(), t.end(), sep, -1), end;
  for (; it != end; ++it) {
    std::string tok = *it;
    std::smatch m;
    if (std::regex_match(tok, m, tor_re)) {
      Int n = std::stoll(m[1]);
      if (n < 2) throw ParseError("torsion order must be >= 2 in '" + text + "'");
      tor.push_back(n);
    } else if (std::regex_match(tok, m, free_re)) {
      k += m[1].matched ? std::stoi(m[1]) : 1;
    } else {
      throw ParseError("bad group factor '" + tok + "' in '" + text + "'");
    }
  }
  return AbelianGroup(k, tor);
}

Vec QuotientMap::apply(const Vec& x) const {
  source.check(x);
  Vec y;
  y.reserve(target.dim());
  if (modulus >= 2)
    for (int i = 0; i < source.free_rank(); ++i) y.push_back(floor_mod(x[i], modulus));
  for (std::size_t i = source.free_rank(); i < x.size(); ++i) y.push_back(x[i]);
  return target.normalize(std::move(y));
}

QuotientMap quotient_mod(const AbelianGroup& B, Int m) {
  if (m < 1) throw std::invalid_argument("quotient modulus must be >= 1");
  // With m == 1 the free block collapses entirely and the target is Tor(B).
  std::vector<Int> tor;
  if (m >= 2)
    for (int i = 0; i < B.free_rank(); ++i) tor.push_back(m);
  for (Int n : B.torsion()) tor.push_back(n);
  return QuotientMap{B, m, AbelianGroup(0, tor)};
}

std::string format_vec(const Vec& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s + "]";
}

Vec parse_vec(const std::string& text) {
  static const std::regex whole(R"(^\s*\[\s*(-?\d+(\s*,\s*-?\d+)*)?\s*\]\s*$)");
  if (!std::regex_match(text, whole)) throw ParseError("bad element '" + text + "'");
  Vec v;
  static const std::regex num(R"(-?\d+)");
  for (std::sregex_iterator it(text.begin(), text.end(), num), end; it != end; ++it)
    v.push_back(std::stoll(it->str()));
  return v;
}

}  // namespace wcs
