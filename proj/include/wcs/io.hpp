#pragma once

// Text and JSON forms of groups, elements and reports.

#include <string>

#include <json.hpp>
#include "wcs/depth.hpp"
#include "wcs/witness.hpp"
#include "wcs/wreath.hpp"

namespace wcs {

using Json = nlohmann::ordered_json;

/// "A wr B", each side in AbelianGroup::parse syntax ("F2" aliases "Z/2").
WreathGroup parse_wreath_group(const std::string& text);
/// R wr Z with R = Z or Z/p, p prime.
bool is_laurent_group(const WreathGroup& W);

/// Laurent "(P, m)" for R wr Z, JSON {"f": [[x, v], ...], "b": b} for any
/// group, or "identity". Scalars stand for 1-dimensional vectors.
WreathElement parse_element(const WreathGroup& W, const std::string& text);
/// Laurent form when available, compact JSON otherwise; re-parses exactly.
std::string format_element(const WreathGroup& W, const WreathElement& g);
Json element_json(const WreathGroup& W, const WreathElement& g);

Json witness_report(const WreathGroup& W, const WreathElement& g1, const WreathElement& g2, const WitnessQuotient& q);
Json depth_report(const DepthResult& d);
Json family_report(const FamilyPair& fam, const DepthResult& d);

}  // namespace wcs
