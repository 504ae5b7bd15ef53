// Command-line front end. Exit codes: 0 computed, 1 usage or parse error,
// 2 budget exceeded, 3 internal contract violation.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "acceptance_criteria.hpp"
#include "wcs/depth.hpp"
#include "wcs/errors.hpp"
#include "wcs/io.hpp"
#include "wcs/laurent.hpp"
#include "wcs/witness.hpp"

namespace {

using namespace wcs;

constexpr int kOk = 0, kUsage = 1, kBudget = 2, kContract = 3;

struct Flags {
  std::string group, ring = "F2", x, y, out, format, tag;
  std::uint64_t budget = 0;
  std::uint64_t seed = 20240601;
  unsigned jobs = 1;
  Int p = 2;
  int i = 1;
  Int n_max = 4;
  bool no_timing = false;
};

void emit(const Flags& fl, const std::string& text) {
  if (fl.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(fl.out, std::ios::binary);
  if (!f) throw ParseError("cannot open --out file '" + fl.out + "'");
  f << text;
}

std::string json_text(const Json& j) { return j.dump(2) + "\n"; }

// One "key value" line per leaf; nested keys are joined with '.'.
void flatten(const Json& j, const std::string& prefix, std::ostringstream& os) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, os);
  } else {
    os << prefix << " " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

std::string report_text(const Flags& fl, const Json& j) {
  if (fl.format != "text") return json_text(j);
  std::ostringstream os;
  flatten(j, "", os);
  return os.str();
}

int conj_test(const Flags& fl) {
  const WreathGroup W = parse_wreath_group(fl.group);
  const WreathElement x = parse_element(W, fl.x), y = parse_element(W, fl.y);
  const auto z = W.conjugate_test(x, y);
  const std::string witness = !z ? "" : (*z == W.identity() ? "identity" : format_element(W, *z));
  if (fl.format == "json") {
    Json j;
    j["group"] = W.to_string();
    j["x"] = format_element(W, x);
    j["y"] = format_element(W, y);
    j["answer"] = z ? "conjugate" : "nonconjugate";
    j["witness"] = z ? Json(witness) : Json(nullptr);
    emit(fl, json_text(j));
  } else {
    emit(fl, z ? "conjugate\nwitness " + witness + "\n" : "nonconjugate\n");
  }
  return kOk;
}

int reduce(const Flags& fl) {
  const WreathGroup W = parse_wreath_group(fl.group);
  const WreathElement x = parse_element(W, fl.x);
  const Reduction red = W.reduce(x);
  if (fl.format == "json") {
    Json j;
    j["x"] = format_element(W, x);
    j["reduced"] = format_element(W, red.reduced);
    j["conjugator"] = format_element(W, red.conjugator);
    emit(fl, json_text(j));
  } else {
    emit(fl, "reduced " + format_element(W, red.reduced) + "\nconjugator " + format_element(W, red.conjugator) +
                 "\n");
  }
  return kOk;
}

int witness(const Flags& fl) {
  const WreathGroup W = parse_wreath_group(fl.group);
  const WreathElement x = parse_element(W, fl.x), y = parse_element(W, fl.y);
  const WitnessQuotient q = full_witness(W, x, y);
  const Json j = witness_report(W, x, y, q);
  if (fl.format == "text") {
    std::ostringstream os;
    os << "target " << j["target"].get<std::string>() << "\ncertificate " << j["certificate"].get<std::string>()
       << "\nacting_modulus " << q.acting_modulus() << "\nbase_modulus " << q.base_modulus() << "\nlog2_order "
       << q.log2_order << "\n";
    emit(fl, os.str());
  } else {
    emit(fl, json_text(j));
  }
  return kOk;
}

int depth(const Flags& fl) {
  const Ring r = parse_ring(fl.ring);
  const SemidirectElement x = parse_semidirect(fl.x, r), y = parse_semidirect(fl.y, r);
  const DepthResult d = split_conjugacy_depth(x, y, fl.budget ? fl.budget : 64);
  emit(fl, report_text(fl, depth_report(d)));
  return d.found ? kOk : kBudget;
}

int family(const Flags& fl) {
  FamilyPair fam;
  if (fl.tag == "lamplighter")
    fam = family_lamplighter(fl.p, fl.i);
  else if (fl.tag == "z-wr-z")
    fam = family_zwrz(fl.i);
  else
    throw ParseError("--tag must be 'lamplighter' or 'z-wr-z'");
  std::uint64_t budget = fl.budget;
  if (budget == 0) {
    if (!fam.bound_upper) throw ParseError("upper bound overflows; pass --budget explicitly");
    budget = *fam.bound_upper;
  }
  const DepthResult d = split_conjugacy_depth(fam.f, fam.g, budget);
  emit(fl, report_text(fl, family_report(fam, d)));
  return d.found ? kOk : kBudget;
}

int sweep(const Flags& fl) {
  SweepOptions opt;
  if (fl.budget) opt.budget = fl.budget;
  opt.jobs = fl.jobs;
  const auto rows = depth_sweep(parse_ring(fl.ring), fl.n_max, opt);
  emit(fl, sweep_csv(rows, !fl.no_timing));
  return kOk;
}

int verify(const Flags& fl) {
  acceptance::Options opt;
  opt.seed = fl.seed;
  opt.jobs = std::max(2u, fl.jobs);
  int passed = 0, total = 0;
  std::ostringstream os;
  acceptance::run_all(opt, [&](const acceptance::CriterionResult& r) {
    ++total;
    passed += r.pass;
    const std::string line = acceptance::format_line(r);
    os << line << "\n";
    std::cout << line << std::endl;
  });
  const std::string summary = std::to_string(passed) + "/" + std::to_string(total) + " criteria pass\n";
  std::cout << summary;
  if (!fl.out.empty()) emit(fl, os.str() + summary);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conjugacy, witness quotients and split conjugacy depth in wreath products"};
  app.require_subcommand(1);
  Flags fl;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", fl.out, "Write output to this file");
    sub->add_option("--format", fl.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
  };
  auto add_pair = [&](CLI::App* sub, bool two) {
    sub->add_option("--group", fl.group, "Group, e.g. \"F2 wr Z\" or \"Z/4 wr Z x Z/2\"")->required();
    sub->add_option("--x", fl.x, "First element")->required();
    if (two) sub->add_option("--y", fl.y, "Second element")->required();
  };

  auto* c = app.add_subcommand("conj-test", "Decide conjugacy and print a conjugator");
  add_pair(c, true);
  add_common(c);
  auto* r = app.add_subcommand("reduce", "Conjugate an element to reduced form");
  add_pair(r, false);
  add_common(r);
  auto* w = app.add_subcommand("witness", "Finite quotient separating two nonconjugate elements");
  add_pair(w, true);
  add_common(w);
  auto* d = app.add_subcommand("depth", "Split conjugacy depth of a pair in F_p wr Z or Z wr Z");
  d->add_option("--ring", fl.ring, "F<p> or Z");
  d->add_option("--x", fl.x, "First element (P, m)")->required();
  d->add_option("--y", fl.y, "Second element (P, m)")->required();
  d->add_option("--budget", fl.budget, "Largest subgroup index to try (default 64)");
  add_common(d);
  auto* f = app.add_subcommand("family", "Split conjugacy depth of a lower-bound family pair");
  f->add_option("--tag", fl.tag, "lamplighter or z-wr-z")->required();
  f->add_option("--p", fl.p, "Field characteristic (lamplighter)");
  f->add_option("--i", fl.i, "Family index");
  f->add_option("--budget", fl.budget, "Largest subgroup index (default: the upper bound)");
  add_common(f);
  auto* s = app.add_subcommand("sweep", "Maximal split depth over word-metric balls, as CSV");
  s->add_option("--ring", fl.ring, "F<p> or Z");
  s->add_option("--n-max", fl.n_max, "Largest ball radius")->check(CLI::Range(0, 64));
  s->add_option("--budget", fl.budget, "Largest subgroup index (default 4096)");
  s->add_option("--jobs", fl.jobs, "Worker threads")->check(CLI::Range(1u, 256u));
  s->add_flag("--no-timing", fl.no_timing, "Print 0 in the elapsed_ms column");
  add_common(s);
  auto* v = app.add_subcommand("verify", "Run the acceptance suite and print a scorecard");
  v->add_option("--seed", fl.seed, "Seed for randomized checks");
  v->add_option("--jobs", fl.jobs, "Worker threads for the sweep check")->check(CLI::Range(1u, 256u));
  add_common(v);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*c) return conj_test(fl);
    if (*r) return reduce(fl);
    if (*w) return witness(fl);
    if (*d) return depth(fl);
    if (*f) return family(fl);
    if (*s) return sweep(fl);
    if (*v) return verify(fl);
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const ContractViolation& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kContract;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kContract;
  }
  return kUsage;
}
