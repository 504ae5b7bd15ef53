#include "wcs/io.hpp"

#include <regex>

#include "wcs/errors.hpp"
#include "wcs/laurent.hpp"

namespace wcs {

namespace {

Vec json_vec(const Json& j, std::size_t dim, const char* what) {
  if (j.is_number_integer()) {
    if (dim != 1) throw ParseError(std::string(what) + ": scalar given for a group of dimension " + std::to_string(dim));
    return {j.get<Int>()};
  }
  if (!j.is_array()) throw ParseError(std::string(what) + " must be an integer or an array of integers");
  Vec v;
  for (const Json& x : j) {
    if (!x.is_number_integer()) throw ParseError(std::string(what) + " must contain integers only");
    v.push_back(x.get<Int>());
  }
  if (v.size() != dim) throw ParseError(std::string(what) + " has the wrong dimension");
  return v;
}

Json optional_u64(const std::optional<std::uint64_t>& v) { return v ? Json(*v) : Json(nullptr); }

Json subgroup_json(const SplitSubgroup& N) {
  Json j;
  j["descriptor"] = N.describe();
  j["ring"] = ring_name(N.ring);
  j["t"] = N.t;
  j["quotient_size"] = N.quotient_size;
  j["index"] = N.index();
  j["normal"] = is_normal(N);
  return j;
}

}  // namespace

WreathGroup parse_wreath_group(const std::string& text) {
  static const std::regex wr(R"(^\s*(.+?)\s+wr\s+(.+?)\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, wr)) throw ParseError("group must look like 'A wr B', got '" + text + "'");
  return WreathGroup(AbelianGroup::parse(m[1]), AbelianGroup::parse(m[2]));
}

bool is_laurent_group(const WreathGroup& W) {
  try {
    wreath_ring(W);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

WreathElement parse_element(const WreathGroup& W, const std::string& text) {
  const std::string t = std::regex_replace(text, std::regex(R"(^\s+|\s+$)"), "");
  if (t == "identity" || t == "1" || t == "e") return W.identity();
  if (!t.empty() && t.front() == '(') {
    if (!is_laurent_group(W)) throw ParseError("Laurent notation needs a group of the form R wr Z");
    return to_wreath(W, parse_semidirect(t, wreath_ring(W)));
  }
  Json j;
  try {
    j = Json::parse(t);
  } catch (const Json::parse_error& e) {
    throw ParseError("element is neither '(P, m)' nor JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) throw ParseError("JSON element must be an object");
  if (j.contains("A") && AbelianGroup::parse(j["A"].get<std::string>()) != W.base())
    throw ParseError("element base group does not match --group");
  if (j.contains("B") && AbelianGroup::parse(j["B"].get<std::string>()) != W.acting())
    throw ParseError("element acting group does not match --group");
  const std::size_t da = W.base().dim(), db = W.acting().dim();
  std::vector<std::pair<Vec, Vec>> f;
  if (j.contains("f")) {
    if (!j["f"].is_array()) throw ParseError("'f' must be a list of [position, value] pairs");
    for (const Json& entry : j["f"]) {
      if (!entry.is_array() || entry.size() != 2) throw ParseError("'f' entries must be [position, value]");
      f.emplace_back(json_vec(entry[0], db, "position"), json_vec(entry[1], da, "value"));
    }
  }
  const Vec b = j.contains("b") ? json_vec(j["b"], db, "b") : W.acting().zero();
  for (const auto& [x, v] : f) {
    W.acting().check(x);
    W.base().check(v);
  }
  W.acting().check(b);
  return W.make(f, b);
}

Json element_json(const WreathGroup& W, const WreathElement& g) {
  Json j;
  Json f = Json::array();
  for (const auto& [x, v] : g.f) f.push_back(Json::array({x, v}));
  j["f"] = f;
  j["b"] = g.b;
  if (is_laurent_group(W)) j["laurent"] = to_string(from_wreath(W, g));
  return j;
}

std::string format_element(const WreathGroup& W, const WreathElement& g) {
  if (is_laurent_group(W)) return to_string(from_wreath(W, g));
  Json j = element_json(W, g);
  return j.dump();
}

Json witness_report(const WreathGroup& W, const WreathElement& g1, const WreathElement& g2, const WitnessQuotient& q) {
  Json j;
  j["group"] = W.to_string();
  j["x"] = format_element(W, g1);
  j["y"] = format_element(W, g2);
  j["acting_modulus"] = q.acting_modulus();
  j["base_modulus"] = q.base_modulus();
  j["target"] = q.abelian_target ? q.abelian_group.to_string() : q.target.to_string();
  j["target_order"] = optional_u64(q.order);
  j["log2_target_order"] = q.log2_order;
  j["certificate"] = to_string(q.kind);
  j["radius"] = q.ell;
  j["modulus_bound"] = q.modulus_bound;
  if (q.abelian_target) {
    j["image_x"] = format_vec(q.image1.b);
    j["image_y"] = format_vec(q.image2.b);
  } else {
    j["image_x"] = q.target.format(q.image1);
    j["image_y"] = q.target.format(q.image2);
  }
  j["reverified"] = witness_separates(q, g1, g2);
  j["transcript"] = q.transcript;
  return j;
}

Json depth_report(const DepthResult& d) {
  Json j;
  j["x"] = to_string(d.g1);
  j["y"] = to_string(d.g2);
  j["ring"] = ring_name(d.g1.P.ring);
  j["budget"] = d.budget;
  j["split_depth"] = d.found ? Json(d.split_depth) : Json("exceeds-budget");
  j["subgroup"] = d.subgroup ? subgroup_json(*d.subgroup) : Json(nullptr);
  j["candidates_checked"] = d.candidates_checked;
  return j;
}

Json family_report(const FamilyPair& fam, const DepthResult& d) {
  Json j;
  j["family"] = fam.tag;
  j["p"] = fam.ring == 0 ? Json(nullptr) : Json(fam.ring);
  j["q"] = fam.q;
  j["lower"] = optional_u64(fam.bound_lower);
  j["upper"] = optional_u64(fam.bound_upper);
  j["split_depth"] = d.found ? Json(d.split_depth) : Json("exceeds-budget");
  j["i"] = fam.i;
  j["f"] = to_string(fam.f);
  j["g"] = to_string(fam.g);
  j["word_length"] = {fam.length_f.value, fam.length_g.value};
  j["subgroup"] = d.subgroup ? Json(d.subgroup->describe()) : Json(nullptr);
  if (fam.tag == "z-wr-z") {
    j["alpha"] = fam.alpha;
    j["k"] = fam.k;
  }
  return j;
}

}  // namespace wcs
