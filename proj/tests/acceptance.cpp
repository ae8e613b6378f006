// Acceptance suite: one line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "qfl/dsl.hpp"
#include "qfl/errors.hpp"
#include "qfl/fields.hpp"
#include "qfl/linkage.hpp"
#include "qfl/localglobal.hpp"
#include "qfl/pfister.hpp"

using namespace qfl;

namespace {

constexpr double kLimitFinite = 5.0;
constexpr double kLimitSpringer = 30.0;
constexpr double kLimitNormalize = 60.0;
constexpr double kLimitTopLinked = 120.0;
constexpr double kLimitHigherLocal = 600.0;
constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  std::size_t checked = 0;
  std::size_t failures = 0;
  std::string note;
};

int failed_criteria = 0;

void report(int id, const std::string& name, const Outcome& o, double seconds, double limit) {
  const bool ok = o.failures == 0 && o.checked > 0 && (limit <= 0 || seconds < limit);
  if (!ok) ++failed_criteria;
  std::printf("[%s] %d. %s: %zu checked, %zu failures, %.1f s", ok ? "PASS" : "FAIL", id, name.c_str(), o.checked,
              o.failures, seconds);
  if (limit > 0) std::printf(" (limit %.0f s)", limit);
  if (!o.note.empty()) std::printf("; %s", o.note.c_str());
  std::printf("\n");
  std::fflush(stdout);
}

template <class F>
void run(int id, const std::string& name, double limit, F body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.failures += 1;
    o.note = std::string("exception: ") + e.what();
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report(id, name, o, s, limit);
}

const FieldTower* laurent(std::uint64_t q) { return parse_field("GF(" + std::to_string(q) + ")((t))"); }

Element nonzero_scalar(const FieldTower* t, Rng& rng) {
  return Element::scalar(t, static_cast<FiniteField::Elem>(1 + rng() % (t->base().order() - 1)));
}

// (a, b) at t over GF(q)((t)) from the tame formula
// ((-1)^(ab) a0^vb / b0^va)^((q-1)/2).
int tame_symbol(const Element& a, const Element& b) {
  const FiniteField& f = a.tower()->base();
  const long long va = outer_order(a), vb = outer_order(b);
  const FiniteField::Elem a0 = angular_component(a).scalar_value();
  const FiniteField::Elem b0 = angular_component(b).scalar_value();
  auto pw = [&](FiniteField::Elem x, long long e) {
    const FiniteField::Elem base = e < 0 ? f.inv(x) : x;
    return f.pow(base, static_cast<std::uint64_t>(e < 0 ? -e : e));
  };
  FiniteField::Elem u = f.mul(pw(a0, vb), pw(b0, -va));
  if ((va * vb) % 2 != 0) u = f.neg(u);
  return f.pow(u, (f.order() - 1) / 2) == 1 ? 1 : -1;
}

bool symbol_isotropic(const std::vector<Element>& d) {
  if (d.size() == 3) return tame_symbol(-d[0] * d[2], -d[1] * d[2]) == 1;
  const Element disc = d[0] * d[1] * d[2] * d[3];
  // Square test by the same formula: disc is a square iff (disc, x) = 1 for x in {t, nonsquare unit}.
  const FieldTower* t = disc.tower();
  FiniteField::Elem ns = 2;
  while (t->base().is_square(ns)) ++ns;
  const bool square = tame_symbol(disc, Element::variable(t, 0)) == 1 && tame_symbol(disc, Element::scalar(t, ns)) == 1;
  if (!square) return true;
  return tame_symbol(-d[0] * d[1], -d[0] * d[2]) == 1;
}

bool brute_isotropic(const FieldTower* t, const std::vector<FiniteField::Elem>& d) {
  const std::uint64_t q = t->base().order();
  const FiniteField& f = t->base();
  std::vector<FiniteField::Elem> x(d.size(), 0);
  std::function<bool(std::size_t, bool)> rec = [&](std::size_t i, bool nonzero) -> bool {
    if (i == d.size()) {
      if (!nonzero) return false;
      FiniteField::Elem s = 0;
      for (std::size_t k = 0; k < d.size(); ++k) s = f.add(s, f.mul(d[k], f.mul(x[k], x[k])));
      return s == 0;
    }
    for (FiniteField::Elem c = 0; c < q; ++c) {
      x[i] = c;
      if (rec(i + 1, nonzero || c != 0)) return true;
    }
    return false;
  };
  return rec(0, false);
}

Outcome finite_exhaustive() {
  Outcome o;
  for (std::uint64_t q : {3, 5}) {
    const FieldTower* t = FieldTower::finite(q);
    std::vector<FiniteField::Elem> d;
    std::function<void()> rec = [&] {
      if (!d.empty()) {
        std::vector<Element> e;
        for (auto c : d) e.push_back(Element::scalar(t, c));
        ++o.checked;
        if (is_isotropic(QuadraticForm(t, e)) != brute_isotropic(t, d)) ++o.failures;
      }
      if (d.size() == 3) return;
      for (FiniteField::Elem c = 1; c < q; ++c) {
        d.push_back(c);
        rec();
        d.pop_back();
      }
    };
    rec();
  }
  return o;
}

Outcome springer_vs_hilbert() {
  Outcome o;
  for (std::uint64_t q : {3, 5, 7}) {
    const FieldTower* t = laurent(q);
    for (std::size_t i = 0; i < 1000; ++i) {
      Rng rng(derive_seed(kSeed + q, i));
      const std::size_t n = 3 + rng() % 2;
      std::vector<Element> d;
      for (std::size_t k = 0; k < n; ++k) d.push_back(sample(t, SampleBudget{}, rng));
      ++o.checked;
      if (is_isotropic(QuadraticForm(t, d)) != symbol_isotropic(d)) ++o.failures;
    }
  }
  return o;
}

Outcome value_formula() {
  Outcome o;
  const std::uint64_t qs[] = {3, 5, 7};
  for (std::size_t i = 0; i < 1000; ++i) {
    Rng rng(derive_seed(kSeed + 3, i));
    const FieldTower* t = laurent(qs[i % 3]);
    std::vector<Element> d;
    for (;;) {
      d.clear();
      const std::size_t n = 1 + rng() % 2;
      for (std::size_t k = 0; k < n; ++k) d.push_back(sample_polynomial(t, 2, rng));
      std::vector<Element> res;
      for (const auto& x : d) res.push_back(residue(x));
      if (!is_isotropic(QuadraticForm(t->inner(), res))) break;
    }
    Vector x;
    long long vmin = 0;
    bool any = false;
    for (std::size_t k = 0; k < d.size(); ++k) {
      Element xk = (k > 0 && rng() % 4 == 0) ? Element::zero(t) : sample(t, SampleBudget{}, rng);
      if (!xk.is_zero()) {
        vmin = any ? std::min(vmin, outer_order(xk)) : outer_order(xk);
        any = true;
      }
      x.push_back(xk);
    }
    if (!any) continue;
    ++o.checked;
    const Element value = QuadraticForm(t, d).evaluate(x);
    if (value.is_zero() || outer_order(value) != 2 * vmin) ++o.failures;
  }
  return o;
}

// A random isometric copy: permute, rescale by squares and rewrite
// <a, b> as <a + b, ab(a + b)>.
QuadraticForm isometric_copy(const QuadraticForm& q, Rng& rng) {
  const FieldTower* t = q.tower();
  std::vector<Element> d = q.diag();
  for (int round = 0; round < 3; ++round) {
    std::shuffle(d.begin(), d.end(), rng);
    if (d.size() >= 2 && !(d[0] + d[1]).is_zero()) {
      const Element s = d[0] + d[1];
      const Element p = d[0] * d[1] * s;
      d[0] = s;
      d[1] = p;
    }
    const std::size_t k = rng() % d.size();
    const Element c = sample(t, SampleBudget{1, 1}, rng);
    d[k] *= c * c;
  }
  return QuadraticForm(t, d);
}

Outcome residue_classification() {
  Outcome o;
  const FieldTower* t = laurent(3);
  const ValuationCtx v = ValuationCtx::outer(t);
  std::size_t positives = 0;
  for (std::size_t i = 0; i < 500; ++i) {
    Rng rng(derive_seed(kSeed + 4, i));
    auto anisotropic = [&](std::size_t n) {
      for (;;) {
        std::vector<Element> d;
        for (std::size_t k = 0; k < n; ++k) d.push_back(sample(t, SampleBudget{}, rng));
        QuadraticForm f(t, d);
        if (!is_isotropic(f)) return f;
      }
    };
    const std::size_t n = 1 + rng() % 4;
    const QuadraticForm a = anisotropic(n);
    const QuadraticForm b = rng() % 2 ? isometric_copy(a, rng) : anisotropic(n);
    const ResidueDecomposition ra = springer_decompose(a, v), rb = springer_decompose(b, v);
    bool parts = true;
    for (std::size_t mask = 0; mask < 2; ++mask) {
      const QuadraticForm* pa = ra.part_for_mask(mask);
      const QuadraticForm* pb = rb.part_for_mask(mask);
      const QuadraticForm ea = pa ? *pa : QuadraticForm(t->inner());
      const QuadraticForm eb = pb ? *pb : QuadraticForm(t->inner());
      parts = parts && isometric(ea, eb);
    }
    const bool iso = isometric(a, b);
    positives += iso;
    ++o.checked;
    if (iso != parts) ++o.failures;
  }
  o.note = std::to_string(positives) + " isometric pairs";
  return o;
}

bool is_unit(const ValuationCtx& v, const Element& x) {
  for (long long e : v.value(x)) {
    if (e != 0) return false;
  }
  return true;
}

Outcome slot_normalization() {
  Outcome o;
  const char* fields[] = {"GF(3)((t))", "GF(5)((t))", "GF(7)((t))", "GF(3)((t))((u))"};
  for (std::size_t i = 0; i < 300; ++i) {
    Rng rng(derive_seed(kSeed + 5, i));
    const FieldTower* t = parse_field(fields[i % 4]);
    const ValuationCtx v = ValuationCtx::full(t);
    const std::size_t fold = 2 + rng() % 3;
    std::vector<Element> slots;
    for (std::size_t k = 0; k + 1 < fold; ++k) slots.push_back(sample(t, SampleBudget{}, rng));
    Element last = nonzero_scalar(t, rng);
    for (const auto& a : slots) {
      if (rng() % 2) last *= a;
    }
    const Element s = sample(t, SampleBudget{1, 1}, rng);
    slots.push_back(last * s * s);
    const BilinearPfisterSymbol b(t, slots);
    auto [out, trace] = normalize_last_slot(b, v);
    ++o.checked;
    if (!is_unit(v, out.slots.back()) || !isometric(expand(b), expand(out)) || !(replay(b, trace) == out)) {
      ++o.failures;
    }
  }
  return o;
}

Outcome from_report(const VerificationReport& r, Outcome o = {}) {
  o.checked += r.samples;
  o.failures += r.failures.size();
  for (std::size_t k = 0; k < std::min<std::size_t>(r.failures.size(), 2); ++k) o.note += r.failures[k] + "; ";
  return o;
}

VerifyOptions options() {
  VerifyOptions o;
  o.timing = false;
  return o;
}

Outcome residue_theorem() {
  Outcome o = from_report(verify_residue_transfer(parse_field("GF(3)((t))"), 1, 1, 200, kSeed, options()));
  return from_report(verify_residue_transfer(parse_field("GF(3)((t))((u))"), 1, 2, 200, kSeed, options()), o);
}

Outcome linkage_lifting() {
  Outcome o;
  for (std::uint64_t q : {3, 5}) {
    const std::string base = "GF(" + std::to_string(q) + ")";
    o = from_report(check_top_d_linked(parse_field(base), 1, 200, kSeed, options()), o);
    o = from_report(check_top_d_linked(parse_field(base + "((t))"), 2, 200, kSeed, options()), o);
    o = from_report(check_top_d_linked(parse_field(base + "((t))((u))"), 3, 200, kSeed, options()), o);
  }
  return o;
}

Outcome higher_local() {
  Outcome o;
  std::string counts;
  for (std::uint64_t q : {3, 5}) {
    const VerificationReport r = verify_higher_local_d1(q, 500, kSeed, options());
    o = from_report(r, o);
    // Every isotropic verdict must come with a witness.
    if (r.details["witnesses"].get<std::size_t>() != r.samples) ++o.failures;
    counts += "GF(" + std::to_string(q) + ")(X): " + std::to_string(r.details["witnesses"].get<std::size_t>()) +
              " witnesses, " + std::to_string(r.details["certificates_found"].get<std::size_t>()) +
              " certificates, " + std::to_string(r.details["certificate_budget_exhausted"].get<std::size_t>()) +
              " budget exhaustions  ";
  }
  o.note += counts;
  return o;
}

Outcome certificate_soundness() {
  Outcome o;
  std::size_t emitted = 0, mutated = 0, rejected = 0;
  const char* fields[] = {"GF(3)((t))", "GF(5)((t))", "GF(3)((t))((u))", "GF(3)(X)", "GF(5)(X)"};
  for (std::size_t i = 0; mutated < 100 && i < 2000; ++i) {
    Rng rng(derive_seed(kSeed + 9, i));
    const FieldTower* t = parse_field(fields[i % 5]);
    const int fold = t->outer_is_rational() ? 2 : 2 + static_cast<int>(rng() % t->depth());
    const auto p1 = sample_symbol(t, fold, rng);
    const auto p2 = sample_symbol(t, fold, rng);
    CertificateBudget budget;
    budget.seed = derive_seed(kSeed, i);
    const CertificateSearch c = find_certificate(p1, p2, budget);
    if (c.status != CertificateSearch::Status::Found) continue;
    ++emitted;
    ++o.checked;
    if (!verify_certificate(*c.certificate, p1, p2)) ++o.failures;
    if (is_isotropic(expand(p1))) continue;
    LinkageCertificate bad = *c.certificate;
    bad.left = Element::one(t);
    ++mutated;
    ++o.checked;
    if (verify_certificate(bad, p1, p2)) ++o.failures;
    else ++rejected;
  }
  if (mutated < 100) ++o.failures;
  o.note = std::to_string(emitted) + " certificates re-verified, " + std::to_string(rejected) + "/" +
           std::to_string(mutated) + " mutations rejected";
  return o;
}

}  // namespace

int main() {
  run(1, "finite-field exhaustive ground truth (GF(3), GF(5), dim <= 3)", kLimitFinite, finite_exhaustive);
  run(2, "Springer recursion vs tame Hilbert symbols (3x1000 forms)", kLimitSpringer, springer_vs_hilbert);
  run(3, "value formula v(q(x)) = 2 min v(x_i) (1000 pairs)", 0, value_formula);
  run(4, "residue classification of isometry (500 pairs, GF(3)((t)))", 0, residue_classification);
  run(5, "slot normalization (300 symbols, folds 2-4)", kLimitNormalize, slot_normalization);
  run(6, "Pfister residue transfer (2x200 symbols)", 0, residue_theorem);
  run(7, "linkage lifting, top-d-linked (q in {3,5}, 6x200)", kLimitTopLinked, linkage_lifting);
  run(8, "GF(q)(X) top-2-linked (q in {3,5}, 2x500)", kLimitHigherLocal, higher_local);
  run(9, "certificate soundness and mutation rejection", 0, certificate_soundness);
  std::printf("%d of 9 criteria failed\n", failed_criteria);
  return failed_criteria == 0 ? 0 : 1;
}
