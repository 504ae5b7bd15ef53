#include "wcs/wreath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wcs/errors.hpp"

namespace wcs {

namespace {

void accumulate(const AbelianGroup& A, Func& f, const Vec& key, const Vec& val) {
  auto [it, inserted] = f.try_emplace(key, val);
  if (!inserted) it->second = A.add(it->second, val);
  if (A.is_zero(it->second)) f.erase(it);
}

}  // namespace

std::vector<Vec> support(const Func& f) {
  std::vector<Vec> s;
  s.reserve(f.size());
  for (const auto& [k, v] : f) s.push_back(k);
  return s;
}

WreathElement WreathGroup::make(const std::vector<std::pair<Vec, Vec>>& f, const Vec& b) const {
  WreathElement g{{}, B_.normalize(b)};
  for (const auto& [k, v] : f) accumulate(A_, g.f, B_.normalize(k), A_.normalize(v));
  return g;
}

void WreathGroup::check(const WreathElement& g) const {
  if (!B_.contains(g.b)) throw std::invalid_argument("acting element outside " + B_.to_string());
  for (const auto& [k, v] : g.f) {
    if (!B_.contains(k)) throw std::invalid_argument("support key outside " + B_.to_string());
    if (!A_.contains(v) || A_.is_zero(v)) throw std::invalid_argument("stored value zero or outside " + A_.to_string());
  }
}

Func WreathGroup::act(const Vec& b, const Func& f) const {
  if (B_.is_zero(b)) return f;
  Func r;
  for (const auto& [k, v] : f) r.emplace(B_.add(k, b), v);
  return r;
}

Func WreathGroup::add(const Func& f, const Func& h) const {
  Func r = f;
  for (const auto& [k, v] : h) accumulate(A_, r, k, v);
  return r;
}

Func WreathGroup::neg(const Func& f) const {
  Func r;
  for (const auto& [k, v] : f) r.emplace(k, A_.neg(v));
  return r;
}

WreathElement WreathGroup::multiply(const WreathElement& x, const WreathElement& y) const {
  return {add(x.f, act(x.b, y.f)), B_.add(x.b, y.b)};
}

WreathElement WreathGroup::inverse(const WreathElement& g) const {
  Vec nb = B_.neg(g.b);
  return {neg(act(nb, g.f)), nb};
}

WreathElement WreathGroup::conjugate(const WreathElement& z, const WreathElement& g) const {
  return multiply(multiply(z, g), inverse(z));
}

WordLength WreathGroup::word_length(const WreathElement& g) const {
  Int lamps = 0;
  for (const auto& [k, v] : g.f) lamps += A_.word_length(v);
  const std::vector<Vec> pts = support(g.f);
  const std::size_t n = pts.size();
  auto dist = [&](const Vec& x, const Vec& y) { return B_.word_length(B_.sub(x, y)); };
  const Vec origin = B_.zero();
  if (n == 0) return {dist(origin, g.b) + lamps, true};
  if (n <= 12) {
    const Int INF = std::numeric_limits<Int>::max() / 4;
    std::vector<std::vector<Int>> d(n, std::vector<Int>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = dist(pts[i], pts[j]);
    std::vector<std::vector<Int>> dp(std::size_t{1} << n, std::vector<Int>(n, INF));
    for (std::size_t i = 0; i < n; ++i) dp[std::size_t{1} << i][i] = dist(origin, pts[i]);
    for (std::size_t mask = 1; mask < dp.size(); ++mask)
      for (std::size_t i = 0; i < n; ++i) {
        if (!(mask >> i & 1) || dp[mask][i] >= INF) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (mask >> j & 1) continue;
          std::size_t nm = mask | (std::size_t{1} << j);
          dp[nm][j] = std::min(dp[nm][j], dp[mask][i] + d[i][j]);
        }
      }
    Int best = INF;
    for (std::size_t i = 0; i < n; ++i) best = std::min(best, dp.back()[i] + dist(pts[i], g.b));
    return {best + lamps, true};
  }
  // Nearest-neighbour tour: an upper bound only.
  std::vector<bool> seen(n, false);
  Vec cur = origin;
  Int cost = 0;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = n;
    Int bd = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (seen[j]) continue;
      Int dj = dist(cur, pts[j]);
      if (best == n || dj < bd) best = j, bd = dj;
    }
    seen[best] = true;
    cost += bd;
    cur = pts[best];
  }
  cost += dist(cur, g.b);
  return {cost + lamps, false};
}

bool WreathGroup::is_reduced(const WreathElement& g) const {
  const auto pts = support(g.f);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (B_.in_cyclic(B_.sub(pts[j], pts[i]), g.b)) return false;
  return true;
}

Func WreathGroup::mover(const Vec& b, const Vec& v, const Vec& from, const Vec& to) const {
  auto j = B_.cyclic_index(B_.sub(from, to), b);
  if (!j) throw ContractViolation("mover: points not in a common coset");
  Func h;
  if (*j >= 0) {
    Vec y = to;
    for (Int i = 0; i < *j; ++i) {
      accumulate(A_, h, y, v);
      y = B_.add(y, b);
    }
  } else {
    Vec y = from;
    Vec nv = A_.neg(v);
    for (Int i = 0; i < -*j; ++i) {
      accumulate(A_, h, y, nv);
      y = B_.add(y, b);
    }
  }
  return h;
}

Reduction WreathGroup::reduce(const WreathElement& g) const {
  check(g);
  std::vector<Vec> reps;
  Func fr, h;
  // Map iteration is lexicographic, so the first support point met in each
  // coset is its least one.
  for (const auto& [s, v] : g.f) {
    const Vec* rep = nullptr;
    for (const auto& r : reps)
      if (B_.in_cyclic(B_.sub(s, r), g.b)) {
        rep = &r;
        break;
      }
    if (!rep) {
      reps.push_back(s);
      accumulate(A_, fr, s, v);
      continue;
    }
    accumulate(A_, fr, *rep, v);
    h = add(h, mover(g.b, v, s, *rep));
  }
  Reduction red{{fr, g.b}, base_element(h)};
  if (conjugate(red.conjugator, g) != red.reduced) throw ContractViolation("reduce: conjugator check failed");
  return red;
}

std::optional<WreathElement> WreathGroup::conjugate_test(const WreathElement& g1, const WreathElement& g2) const {
  check(g1);
  check(g2);
  if (g1.b != g2.b) return std::nullopt;
  const Vec& b = g1.b;
  Reduction r1 = reduce(g1), r2 = reduce(g2);
  const auto X = support(r1.reduced.f), Y = support(r2.reduced.f);
  if (X.size() != Y.size()) return std::nullopt;
  std::optional<WreathElement> w;
  if (X.empty()) {
    w = identity();
  } else {
    const Vec& y0 = Y.front();
    for (const auto& x0 : X) {
      const Vec c = B_.sub(x0, y0);
      Func h;
      bool ok = true;
      for (const auto& [x, v] : r1.reduced.f) {
        const Vec p = B_.sub(x, c);
        const Vec* hit = nullptr;
        for (const auto& y : Y)
          if (B_.in_cyclic(B_.sub(p, y), b)) {
            hit = &y;
            break;
          }
        if (!hit || r2.reduced.f.at(*hit) != v) {
          ok = false;
          break;
        }
        if (p != *hit) h = add(h, mover(b, v, p, *hit));
      }
      if (ok) {
        w = WreathElement{h, B_.neg(c)};
        break;
      }
    }
  }
  if (!w) return std::nullopt;
  WreathElement z = multiply(multiply(inverse(r2.conjugator), *w), r1.conjugator);
  if (conjugate(z, g1) != g2) throw ContractViolation("conjugate_test: witness failed re-verification");
  return z;
}

std::vector<WreathElement> WreathGroup::elements(std::uint64_t budget) const {
  if (!is_finite()) throw std::invalid_argument("elements() on infinite wreath product");
  const auto Bs = B_.elements(), As = A_.elements();
  double log_size = Bs.size() * std::log2(static_cast<double>(As.size())) + std::log2(static_cast<double>(Bs.size()));
  if (log_size > std::log2(static_cast<double>(budget)) + 1e-9)
    throw BudgetExceeded("wreath product " + to_string() + " exceeds enumeration budget");
  std::vector<WreathElement> out;
  std::vector<std::size_t> digit(Bs.size(), 0);
  while (true) {
    Func f;
    for (std::size_t i = 0; i < Bs.size(); ++i)
      if (digit[i] != 0) f.emplace(Bs[i], As[digit[i]]);
    for (const auto& b : Bs) out.push_back({f, b});
    std::size_t i = 0;
    while (i < digit.size()) {
      if (++digit[i] < As.size()) break;
      digit[i++] = 0;
    }
    if (i == digit.size()) break;
  }
  return out;
}

std::optional<WreathElement> WreathGroup::brute_force_conjugate(const WreathElement& g1, const WreathElement& g2,
                                                                std::uint64_t budget) const {
  for (const auto& z : elements(budget))
    if (conjugate(z, g1) == g2) return z;
  return std::nullopt;
}

std::string WreathGroup::format(const WreathElement& g) const {
  std::ostringstream os;
  os << "(";
  bool first = true;
  for (const auto& [k, v] : g.f) {
    os << (first ? "" : " + ") << format_vec(v) << "@" << format_vec(k);
    first = false;
  }
  if (first) os << "0";
  os << ", " << format_vec(g.b) << ")";
  return os.str();
}

std::optional<Vec> is_translate(const AbelianGroup& B, const std::vector<Vec>& X, const std::vector<Vec>& Y) {
  auto all = all_translators(B, X, Y);
  if (all.empty()) return std::nullopt;
  return all.front();
}

std::vector<Vec> all_translators(const AbelianGroup& B, const std::vector<Vec>& X, const std::vector<Vec>& Y) {
  std::set<Vec> xs, ys;
  for (const auto& x : X) xs.insert(B.normalize(x));
  for (const auto& y : Y) ys.insert(B.normalize(y));
  if (xs.size() != ys.size()) return {};
  if (xs.empty()) return B.is_finite() ? B.elements() : std::vector<Vec>{B.zero()};
  std::vector<Vec> out;
  const Vec& x0 = *xs.begin();
  for (const auto& y : ys) {
    Vec c = B.sub(y, x0);
    bool ok = true;
    for (const auto& x : xs)
      if (!ys.count(B.add(c, x))) {
        ok = false;
        break;
      }
    if (ok) out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Vec> coset_translators(const WreathGroup& W, const WreathElement& g1, const WreathElement& g2) {
  const auto& A = W.base();
  const auto& B = W.acting();
  if (!B.is_finite()) throw std::invalid_argument("coset_translators needs a finite acting group");
  if (g1.b != g2.b) return {};
  const Vec& b = g1.b;
  auto key = [&](const Vec& x) {
    Vec best = x, y = x;
    Int ord = *B.element_order(b);
    for (Int j = 1; j < ord; ++j) {
      y = B.add(y, b);
      best = std::min(best, y);
    }
    return best;
  };
  auto sums = [&](const Func& f) {
    std::map<Vec, Vec> s;
    for (const auto& [x, v] : f) accumulate(A, s, key(x), v);
    return s;
  };
  const auto target = sums(g2.f);
  std::vector<Vec> out;
  for (const auto& c : B.elements())
    if (sums(W.act(c, g1.f)) == target) out.push_back(c);
  return out;
}

WreathElement extend_quotient_acting(const WreathGroup& W, const QuotientMap& pi, const WreathElement& g) {
  if (pi.source != W.acting()) throw std::invalid_argument("extend_quotient_acting: source mismatch");
  WreathElement r{{}, pi.apply(g.b)};
  for (const auto& [k, v] : g.f) accumulate(W.base(), r.f, pi.apply(k), v);
  return r;
}

WreathElement extend_quotient_base(const WreathGroup& W, const QuotientMap& pi, const WreathElement& g) {
  if (pi.source != W.base()) throw std::invalid_argument("extend_quotient_base: source mismatch");
  WreathElement r{{}, g.b};
  for (const auto& [k, v] : g.f) {
    Vec w = pi.apply(v);
    if (!pi.target.is_zero(w)) r.f.emplace(k, std::move(w));
  }
  return r;
}

namespace {

AbelianGroup sub_group(const AbelianGroup& G, const std::vector<std::size_t>& coords) {
  int k = 0;
  std::vector<Int> tor;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    std::size_t c = coords[i];
    if (c >= G.dim() || (i && coords[i - 1] >= c)) throw std::invalid_argument("retraction coords must increase");
    if (static_cast<int>(c) < G.free_rank())
      ++k;
    else
      tor.push_back(G.torsion()[c - G.free_rank()]);
  }
  return AbelianGroup(k, tor);
}

Vec project(const Vec& x, const std::vector<std::size_t>& coords) {
  Vec y;
  for (auto c : coords) y.push_back(x[c]);
  return y;
}

Vec inject(const AbelianGroup& G, const Vec& y, const std::vector<std::size_t>& coords) {
  Vec x = G.zero();
  for (std::size_t i = 0; i < coords.size(); ++i) x[coords[i]] = y[i];
  return x;
}

}  // namespace

WreathGroup retract_target(const WreathGroup& W, const Retraction& r) {
  return WreathGroup(sub_group(W.base(), r.base_coords), sub_group(W.acting(), r.acting_coords));
}

WreathElement retract_wreath(const WreathGroup& W, const Retraction& r, const WreathElement& g) {
  WreathGroup T = retract_target(W, r);
  Func sums;
  for (const auto& [k, v] : g.f) accumulate(W.base(), sums, project(k, r.acting_coords), v);
  WreathElement out{{}, project(g.b, r.acting_coords)};
  for (const auto& [k, v] : sums) accumulate(T.base(), out.f, k, project(v, r.base_coords));
  return out;
}

WreathElement embed_retract(const WreathGroup& W, const Retraction& r, const WreathElement& g) {
  WreathElement out{{}, inject(W.acting(), g.b, r.acting_coords)};
  for (const auto& [k, v] : g.f)
    accumulate(W.base(), out.f, inject(W.acting(), k, r.acting_coords), inject(W.base(), v, r.base_coords));
  return out;
}

}  // namespace wcs
