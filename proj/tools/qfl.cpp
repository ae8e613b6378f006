#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qfl/dsl.hpp"
#include "qfl/errors.hpp"
#include "qfl/fields.hpp"
#include "qfl/linkage.hpp"
#include "qfl/localglobal.hpp"
#include "qfl/pfister.hpp"

using namespace qfl;
using json = nlohmann::ordered_json;

namespace {

struct Args {
  std::string field;
  std::string form;
  std::string element;
  std::string p1;
  std::string p2;
  std::string theorem;
  bool json = false;
  bool no_timing = false;
  std::uint64_t seed = 1;
  std::size_t samples = 100;
  int budget_degree = 12;
  int candidates = 256;
  std::uint64_t q = 3;
  int d = 1;
  int n = 1;
  int m = 1;
  int rank = 0;
};

std::string parts_table(const ResidueDecomposition& dec) {
  std::string out;
  for (std::size_t i = 0; i < dec.masks.size(); ++i) {
    out += "  " + dec.coset_reps[i].to_string() + ": " + format_form(dec.parts[i]) + "\n";
  }
  return out;
}

json parts_json(const ResidueDecomposition& dec) {
  json out = json::array();
  for (std::size_t i = 0; i < dec.masks.size(); ++i) {
    out.push_back({{"mask", dec.masks[i]}, {"pi", dec.coset_reps[i].to_string()}, {"part", format_form(dec.parts[i])}});
  }
  return out;
}

ValuationCtx valuation_for(const FieldTower* k, int rank) {
  if (rank == 0) return ValuationCtx::full(k);
  return ValuationCtx(k, static_cast<std::size_t>(rank));
}

void emit(const Args& a, const json& j, const std::string& text) {
  if (a.json) std::cout << j.dump(2) << "\n";
  else std::cout << text;
}

int isotropy(const Args& a) {
  const FieldTower* k = parse_field(a.field);
  const QuadraticForm q = parse_form(k, a.form);
  json j{{"field", k->to_string()}, {"form", format_form(q)}};
  std::string text;
  if (k->outer_is_rational()) {
    const GlobalIsotropyReport r = global_isotropy_report(q);
    j["isotropic"] = r.isotropic;
    j["rule"] = r.rule;
    json local = json::array();
    for (const auto& l : r.local) local.push_back({{"place", l.place.to_string(k)}, {"isotropic", l.isotropic}});
    j["local"] = local;
    text = std::string(r.isotropic ? "isotropic" : "anisotropic") + " (" + r.rule + ")\n";
    for (const auto& l : r.local) {
      text += "  " + l.place.to_string(k) + ": " + (l.isotropic ? "isotropic" : "anisotropic") + "\n";
    }
    if (r.isotropic) {
      if (auto z = global_isotropic_vector(q, a.budget_degree)) {
        json w = json::array();
        for (const auto& x : *z) w.push_back(x.to_string());
        j["witness"] = w;
        text += "  witness: " + w.dump() + "\n";
      }
    }
  } else {
    const bool iso = is_isotropic(q);
    j["isotropic"] = iso;
    text = std::string(iso ? "isotropic" : "anisotropic") + "\n";
  }
  emit(a, j, text);
  return 0;
}

int witt(const Args& a) {
  const FieldTower* k = parse_field(a.field);
  const QuadraticForm q = parse_form(k, a.form);
  WittOptions o;
  o.degree_cap = a.budget_degree;
  const WittDecomposition w = witt_decompose(q, o);
  json j{{"field", k->to_string()},
         {"form", format_form(q)},
         {"witt_index", w.witt_index},
         {"anisotropic_kernel", format_form(w.anisotropic_kernel)}};
  emit(a, j,
       "witt index " + std::to_string(w.witt_index) + "\nanisotropic kernel " + format_form(w.anisotropic_kernel) +
           "\n");
  return 0;
}

int residue(const Args& a) {
  const FieldTower* k = parse_field(a.field);
  const QuadraticForm q = parse_form(k, a.form);
  const ValuationCtx v = valuation_for(k, a.rank);
  const ResidueDecomposition dec = springer_decompose(q, v);
  json j{{"field", k->to_string()},
         {"form", format_form(q)},
         {"residue_field", v.residue_tower()->to_string()},
         {"parts", parts_json(dec)}};
  emit(a, j, "residues over " + v.residue_tower()->to_string() + "\n" + parts_table(dec));
  return 0;
}

int square(const Args& a) {
  const FieldTower* k = parse_field(a.field);
  const Element x = parse_element(k, a.element);
  const bool sq = is_square(x);
  json j{{"field", k->to_string()}, {"element", x.to_string()}, {"square", sq}};
  std::string text = std::string(sq ? "square" : "nonsquare") + "\n";
  if (!x.is_zero()) {
    j["class"] = canonical_square_class(x).to_string();
    text += "class " + canonical_square_class(x).to_string() + "\n";
  }
  emit(a, j, text);
  return 0;
}

int pfister_expand(const Args& a) {
  const FieldTower* k = parse_field(a.field);
  const QuadraticPfisterSymbol s = parse_quadratic_symbol(k, a.p1);
  const QuadraticForm q = expand(s);
  json j{{"field", k->to_string()}, {"symbol", format_symbol(s)}, {"form", format_form(q)}};
  emit(a, j, format_form(q) + "\n");
  return 0;
}

int pfister_normalize(const Args& a) {
  const FieldTower* k = parse_field(a.field);
  const BilinearPfisterSymbol s = parse_bilinear_symbol(k, a.p1);
  auto [out, trace] = normalize_last_slot(s, valuation_for(k, a.rank));
  json steps = json::array();
  std::string text;
  for (const auto& st : trace.steps) {
    steps.push_back({{"rule", st.rule.to_string()},
                     {"before", format_symbol(st.before)},
                     {"after", format_symbol(st.after)},
                     {"degenerate", st.degenerate}});
    text += "  " + st.rule.to_string() + ": " + format_symbol(st.before) + " -> " + format_symbol(st.after) +
            (st.degenerate ? " (degenerate)" : "") + "\n";
  }
  json j{{"field", k->to_string()}, {"symbol", format_symbol(s)}, {"normalized", format_symbol(out)}, {"trace", steps}};
  emit(a, j, format_symbol(out) + "\n" + text);
  return 0;
}

int link(const Args& a) {
  const FieldTower* k = parse_field(a.field);
  const QuadraticPfisterSymbol p1 = parse_quadratic_symbol(k, a.p1);
  const QuadraticPfisterSymbol p2 = parse_quadratic_symbol(k, a.p2);
  const bool linked = is_linked_pair(p1, p2, a.budget_degree);
  json j{{"field", k->to_string()}, {"p1", format_symbol(p1)}, {"p2", format_symbol(p2)}, {"linked", linked}};
  emit(a, j, std::string(linked ? "linked" : "not linked") + "\n");
  return 0;
}

int certify(const Args& a) {
  const FieldTower* k = parse_field(a.field);
  const QuadraticPfisterSymbol p1 = parse_quadratic_symbol(k, a.p1);
  const QuadraticPfisterSymbol p2 = parse_quadratic_symbol(k, a.p2);
  CertificateBudget budget;
  budget.degree_cap = a.budget_degree;
  budget.candidates = a.candidates;
  budget.seed = a.seed;
  const CertificateSearch c = find_certificate(p1, p2, budget);
  json j{{"field", k->to_string()}, {"p1", format_symbol(p1)}, {"p2", format_symbol(p2)}};
  std::string text;
  switch (c.status) {
    case CertificateSearch::Status::Found: {
      const LinkageCertificate& cert = *c.certificate;
      json shared = json::array();
      for (const auto& x : cert.shared) shared.push_back(x.to_string());
      j["status"] = "found";
      j["certificate"] = {{"left", cert.left.to_string()},
                          {"left_prime", cert.left_prime.to_string()},
                          {"shared", shared},
                          {"last", cert.last.to_string()},
                          {"first", format_symbol(cert.first())},
                          {"second", format_symbol(cert.second())}};
      text = format_symbol(cert.first()) + "\n" + format_symbol(cert.second()) + "\n";
      break;
    }
    case CertificateSearch::Status::NotFound:
      j["status"] = "not-linked";
      text = "not linked\n";
      break;
    case CertificateSearch::Status::BudgetExceeded:
      j["status"] = "budget-exceeded";
      text = "budget exceeded\n";
      break;
  }
  emit(a, j, text);
  return 0;
}

int verify(const Args& a) {
  VerifyOptions o;
  o.degree_cap = a.budget_degree;
  o.timing = !a.no_timing;
  VerificationReport r;
  if (a.theorem == "higher-local-d1") {
    r = verify_higher_local_d1(a.q, a.samples, a.seed, o);
  } else {
    if (a.field.empty()) throw CLI::ValidationError("--field", a.theorem + " needs --field");
    const FieldTower* k = parse_field(a.field);
    if (a.theorem == "top-linked") r = check_top_d_linked(k, a.d, a.samples, a.seed, o);
    else if (a.theorem == "residue-transfer") r = verify_residue_transfer(k, a.n, a.m, a.samples, a.seed, o);
    else r = verify_lifting_equivalence(k, a.d, a.m, a.samples, a.seed, o);
  }
  std::string text = r.theorem + " on " + r.field + ": " + std::to_string(r.samples) + " seeded samples, " +
                     std::to_string(r.failures.size()) + " failures\n";
  for (const auto& f : r.failures) text += "  " + f + "\n";
  emit(a, r.to_json(), text);
  return r.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadratic forms, Pfister symbols and linkage over towers of finite, Laurent and rational fields"};
  app.require_subcommand(1);
  Args a;
  auto common = [&](CLI::App* s) {
    s->add_flag("--json", a.json, "Emit a JSON report");
    s->add_option("--budget-degree", a.budget_degree, "Degree cap for isotropic vector searches");
  };
  auto needs_field = [&](CLI::App* s) { s->add_option("--field", a.field, "Field, e.g. GF(3)((t))")->required(); };

  auto* iso = app.add_subcommand("isotropy", "Decide isotropy of a form");
  auto* wi = app.add_subcommand("witt", "Witt index and anisotropic kernel");
  auto* re = app.add_subcommand("residue", "Residue forms at each class of vK/2vK");
  for (auto* s : {iso, wi, re}) {
    needs_field(s);
    s->add_option("--form", a.form, "diag[...] or gram[[...]]")->required();
    common(s);
  }
  re->add_option("--rank", a.rank, "Number of outer Laurent levels (default: all)");

  auto* sq = app.add_subcommand("square", "Square test and canonical square class");
  needs_field(sq);
  sq->add_option("--element", a.element, "Field element")->required();
  common(sq);

  auto* pe = app.add_subcommand("pfister-expand", "Expand <<a1, ...; b]] to a diagonal form");
  auto* pn = app.add_subcommand("pfister-normalize", "Make the last slot of <<a1, ..., ad>> a unit");
  for (auto* s : {pe, pn}) {
    needs_field(s);
    s->add_option("--p1", a.p1, "Pfister symbol")->required();
    common(s);
  }
  pn->add_option("--rank", a.rank, "Number of outer Laurent levels (default: all)");

  auto* li = app.add_subcommand("link", "Decide whether two d-fold symbols are linked");
  auto* ce = app.add_subcommand("certify", "Search for a common-slot presentation");
  for (auto* s : {li, ce}) {
    needs_field(s);
    s->add_option("--p1", a.p1, "First symbol")->required();
    s->add_option("--p2", a.p2, "Second symbol")->required();
    common(s);
  }
  ce->add_option("--seed", a.seed, "Seed for candidate values");
  ce->add_option("--budget", a.candidates, "Candidate values per common slot");

  auto* ve = app.add_subcommand("verify", "Seeded verification runs");
  ve->add_option("theorem", a.theorem, "residue-transfer | lifting-equivalence | higher-local-d1 | top-linked")
      ->required()
      ->check(CLI::IsMember({"residue-transfer", "lifting-equivalence", "higher-local-d1", "top-linked"}));
  ve->add_option("--field", a.field, "Field");
  ve->add_option("--q", a.q, "Base field order for higher-local-d1");
  ve->add_option("--d", a.d, "Fold parameter d");
  ve->add_option("--n", a.n, "Residue fold n");
  ve->add_option("--m", a.m, "Number of Laurent levels m");
  ve->add_option("--samples", a.samples, "Number of samples");
  ve->add_option("--seed", a.seed, "Master seed");
  ve->add_flag("--no-timing", a.no_timing, "Report elapsed_ms = 0");
  common(ve);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    if (iso->parsed()) return isotropy(a);
    if (wi->parsed()) return witt(a);
    if (re->parsed()) return residue(a);
    if (sq->parsed()) return square(a);
    if (pe->parsed()) return pfister_expand(a);
    if (pn->parsed()) return pfister_normalize(a);
    if (li->parsed()) return link(a);
    if (ce->parsed()) return certify(a);
    return verify(a);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
