#include "qfl/linkage.hpp"

#include <chrono>

#include "qfl/dsl.hpp"
#include "qfl/errors.hpp"
#include "qfl/fields.hpp"
#include "qfl/localglobal.hpp"

namespace qfl {

QuadraticPfisterSymbol LinkageCertificate::first() const {
  std::vector<Element> slots{left};
  slots.insert(slots.end(), shared.begin(), shared.end());
  return QuadraticPfisterSymbol(tower, std::move(slots), last);
}

QuadraticPfisterSymbol LinkageCertificate::second() const {
  std::vector<Element> slots{left_prime};
  slots.insert(slots.end(), shared.begin(), shared.end());
  return QuadraticPfisterSymbol(tower, std::move(slots), last);
}

namespace {

void require_pair(const QuadraticPfisterSymbol& q1, const QuadraticPfisterSymbol& q2) {
  require_same_tower(q1.tower, q2.tower);
  if (q1.fold() != q2.fold()) {
    fail(ErrorCode::FoldMismatch,
         "folds " + std::to_string(q1.fold()) + " and " + std::to_string(q2.fold()) + " differ");
  }
}

// rho with q ≅ psi ⊥ rho, assuming psi is a subform of q.
QuadraticForm complement(const QuadraticForm& q, const QuadraticForm& psi, int cap) {
  WittOptions o;
  o.degree_cap = cap;
  const WittDecomposition w = witt_decompose(orthogonal_sum(q, negated(psi)), o);
  const std::size_t target = q.dim() - psi.dim();
  std::vector<Element> d = w.anisotropic_kernel.diag();
  if (d.size() > target) fail(ErrorCode::Internal, "common slot form is not a subform");
  const FieldTower* t = q.tower();
  while (d.size() < target) {
    d.push_back(Element::one(t));
    d.push_back(-Element::one(t));
  }
  return QuadraticForm(t, std::move(d));
}

std::optional<Element> common_value(const QuadraticForm& r1, const QuadraticForm& r2, const CertificateBudget& budget,
                                    Rng& rng) {
  const FieldTower* t = r1.tower();
  auto represents = [&](const QuadraticForm& r, const Element& y) {
    return is_isotropic(orthogonal_sum(r, QuadraticForm(t, {-y})));
  };
  if (is_isotropic(r1)) return r2[0];
  if (is_isotropic(r2)) return r1[0];
  if (t->depth() == 1 && t->outer_is_rational()) {
    if (auto z = global_isotropic_vector(orthogonal_sum(r1, negated(r2)), budget.degree_cap)) {
      const Element y = r1.evaluate(Vector(z->begin(), z->begin() + static_cast<long>(r1.dim())));
      if (!y.is_zero()) return y;
    }
  }
  SampleBudget small;
  small.max_valuation = 1;
  small.max_degree = 1;
  for (int k = 0; k < budget.candidates; ++k) {
    Element y;
    if (static_cast<std::size_t>(k) < r1.dim()) {
      y = r1[k];
    } else {
      Vector x;
      for (std::size_t i = 0; i < r1.dim(); ++i) {
        x.push_back(rng() % 3 == 0 ? Element::zero(t) : sample(t, small, rng));
      }
      y = r1.evaluate(x);
    }
    if (!y.is_zero() && represents(r2, y)) return y;
  }
  return std::nullopt;
}

}  // namespace

bool is_linked_pair(const QuadraticPfisterSymbol& q1, const QuadraticPfisterSymbol& q2, int degree_cap) {
  require_pair(q1, q2);
  const std::size_t need = std::size_t{1} << (q1.fold() - 1);
  WittOptions o;
  o.degree_cap = degree_cap;
  o.target_index = need;
  return witt_decompose(orthogonal_sum(expand(q1), negated(expand(q2))), o).witt_index >= need;
}

CertificateSearch find_certificate(const QuadraticPfisterSymbol& q1, const QuadraticPfisterSymbol& q2,
                                   const CertificateBudget& budget) {
  require_pair(q1, q2);
  const std::size_t d = q1.fold();
  if (d < 2) fail(ErrorCode::InvalidArgument, "certificates need fold d >= 2");
  CertificateSearch out;
  if (!is_linked_pair(q1, q2, budget.degree_cap)) return out;
  const FieldTower* t = q1.tower;
  const Element one = Element::one(t);
  const QuadraticForm e1 = expand(q1), e2 = expand(q2);
  std::vector<Element> pure1(e1.diag().begin() + 1, e1.diag().end());
  std::vector<Element> pure2(e2.diag().begin() + 1, e2.diag().end());
  QuadraticForm r1(t, pure1), r2(t, pure2);
  std::vector<Element> psi{one};
  LinkageCertificate cert;
  cert.tower = t;
  Rng rng(budget.seed);
  for (std::size_t step = 0; step + 1 < d; ++step) {
    const auto y = common_value(r1, r2, budget, rng);
    if (!y) {
      out.status = CertificateSearch::Status::BudgetExceeded;
      return out;
    }
    if (step == 0) {
      cert.last = (-*y - one) / Element::from_int(t, 4);
      psi.push_back(*y);
    } else {
      cert.shared.push_back(-*y);
      const std::size_t n = psi.size();
      for (std::size_t i = 0; i < n; ++i) psi.push_back(*y * psi[i]);
    }
    r1 = complement(e1, QuadraticForm(t, psi), budget.degree_cap);
    r2 = complement(e2, QuadraticForm(t, psi), budget.degree_cap);
  }
  // Now q_i ≅ psi ⊥ rho_i with rho_i ≅ -a psi for any -a represented by rho_i.
  cert.left = -r1[0];
  cert.left_prime = -r2[0];
  if (!verify_certificate(cert, q1, q2, budget.degree_cap)) fail(ErrorCode::Internal, "certificate did not re-verify");
  out.status = CertificateSearch::Status::Found;
  out.certificate = std::move(cert);
  return out;
}

bool verify_certificate(const LinkageCertificate& c, const QuadraticPfisterSymbol& q1, const QuadraticPfisterSymbol& q2,
                        int degree_cap) {
  require_pair(q1, q2);
  if (c.tower != q1.tower || c.shared.size() + 2 != q1.fold()) return false;
  const Element cc = Element::one(c.tower) + Element::from_int(c.tower, 4) * c.last;
  Element prod = c.left * c.left_prime * cc;
  for (const auto& a : c.shared) prod *= a;
  if (prod.is_zero()) return false;
  WittOptions o;
  o.degree_cap = degree_cap;
  return isometric(expand(c.first()), expand(q1), o) && isometric(expand(c.second()), expand(q2), o);
}

nlohmann::ordered_json VerificationReport::to_json() const {
  nlohmann::ordered_json j;
  j["theorem"] = theorem;
  j["field"] = field;
  j["d"] = d;
  j["n"] = n;
  j["m"] = m;
  j["samples"] = samples;
  j["seed"] = seed;
  j["failures"] = failures;
  j["elapsed_ms"] = elapsed_ms;
  if (!details.empty()) j["details"] = details;
  return j;
}

QuadraticPfisterSymbol sample_symbol(const FieldTower* k, int fold, Rng& rng) {
  if (fold < 1) fail(ErrorCode::InvalidArgument, "fold must be at least 1");
  const SampleBudget budget;
  std::vector<Element> slots;
  for (int i = 0; i + 1 < fold; ++i) slots.push_back(sample(k, budget, rng));
  const Element one = Element::one(k);
  const Element four = Element::from_int(k, 4);
  for (;;) {
    // b = 0 (the hyperbolic plane) is drawn now and then as well.
    Element b = rng() % 8 == 0 ? Element::zero(k) : sample(k, budget, rng);
    if (!(one + four * b).is_zero()) return QuadraticPfisterSymbol(k, std::move(slots), b);
  }
}

namespace {

class Timer {
 public:
  explicit Timer(bool on) : on_(on), start_(std::chrono::steady_clock::now()) {}
  long long ms() const {
    if (!on_) return 0;
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  bool on_;
  std::chrono::steady_clock::time_point start_;
};

std::string sample_tag(std::size_t i) { return "sample " + std::to_string(i) + ": "; }

}  // namespace

VerificationReport check_top_d_linked(const FieldTower* k, int d, std::size_t samples, std::uint64_t seed,
                                      const VerifyOptions& options) {
  if (d < 1) fail(ErrorCode::InvalidArgument, "d must be at least 1");
  const Timer timer(options.timing);
  VerificationReport r;
  r.theorem = "top-linked";
  r.field = k->to_string();
  r.d = d;
  r.samples = samples;
  r.seed = seed;
  for (std::size_t i = 0; i < samples; ++i) {
    Rng rng(derive_seed(seed, i));
    try {
      const QuadraticPfisterSymbol big = sample_symbol(k, d + 1, rng);
      if (!is_isotropic(expand(big))) r.failures.push_back(sample_tag(i) + format_symbol(big) + " is anisotropic");
      const QuadraticPfisterSymbol p1 = sample_symbol(k, d, rng);
      const QuadraticPfisterSymbol p2 = sample_symbol(k, d, rng);
      if (!is_linked_pair(p1, p2, options.degree_cap)) {
        r.failures.push_back(sample_tag(i) + format_symbol(p1) + " and " + format_symbol(p2) + " are not linked");
      }
    } catch (const Error& e) {
      r.failures.push_back(sample_tag(i) + e.what());
    }
  }
  r.elapsed_ms = timer.ms();
  return r;
}

VerificationReport verify_residue_transfer(const FieldTower* k, int n, int m, std::size_t samples, std::uint64_t seed,
                                           const VerifyOptions& options) {
  if (m < 1 || k->outer_laurent_run() < static_cast<std::size_t>(m)) {
    fail(ErrorCode::ConfigUnsupported, k->to_string() + " does not have " + std::to_string(m) + " outer Laurent levels");
  }
  const ValuationCtx v(k, static_cast<std::size_t>(m));
  const FieldTower* res = v.residue_tower();
  if (n != 1 || !res->is_finite()) {
    fail(ErrorCode::ConfigUnsupported, "I^(n+1) of the residue field is only certified for n = 1 over a finite field");
  }
  const Timer timer(options.timing);
  VerificationReport r;
  r.theorem = "residue-transfer";
  r.field = k->to_string();
  r.n = n;
  r.m = m;
  r.d = n + m;
  r.samples = samples;
  r.seed = seed;
  auto lift = [&](const QuadraticPfisterSymbol& s) {
    std::vector<Element> slots;
    for (int i = 0; i < m; ++i) slots.push_back(v.coset_rep(std::size_t{1} << i));
    for (const auto& a : s.slots) slots.push_back(a.lift(k));
    return QuadraticPfisterSymbol(k, std::move(slots), s.last.lift(k));
  };
  std::size_t isotropic_inputs = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    Rng rng(derive_seed(seed, i));
    const std::string tag = sample_tag(i);
    try {
      // (a) the first residue of an (n+m)-fold symbol is an n'-fold symbol.
      const QuadraticPfisterSymbol s = sample_symbol(k, n + m, rng);
      const QuadraticForm q = expand(s);
      const PfisterResidueReport rep = pfister_residues(s, v);
      if (rep.isotropic) {
        ++isotropic_inputs;
        if (!is_isotropic(q)) r.failures.push_back(tag + format_symbol(s) + " reported isotropic");
      } else {
        const auto folds = static_cast<int>(rep.first_residue.fold());
        if (folds < n || folds > n + m) {
          r.failures.push_back(tag + "first residue of " + format_symbol(s) + " has fold " + std::to_string(folds));
        }
        if (!isometric(expand(rep.presentation), q)) {
          r.failures.push_back(tag + "presentation of " + format_symbol(s) + " is not isometric");
        }
        const QuadraticForm first = expand(rep.first_residue);
        if (is_isotropic(first)) r.failures.push_back(tag + "first residue of " + format_symbol(s) + " is isotropic");
        const ResidueDecomposition parts = residue_parts(q, v);
        for (const auto& c : rep.cosets) {
          const QuadraticForm* part = parts.part_for_mask(c.mask);
          if (!part || !isometric(*part, scaled(first, c.multiplier))) {
            r.failures.push_back(tag + "residue of " + format_symbol(s) + " at class " + std::to_string(c.mask) +
                                 " is not similar to the first residue");
          }
        }
        for (std::size_t mask : rep.zero_masks) {
          if (parts.part_for_mask(mask)) {
            r.failures.push_back(tag + "residue of " + format_symbol(s) + " off the span is nonzero");
          }
        }
      }
      // (b) lifts hit every residue symbol.
      const QuadraticPfisterSymbol s1 = sample_symbol(res, n, rng);
      const QuadraticPfisterSymbol s2 = sample_symbol(res, n, rng);
      const QuadraticPfisterSymbol l1 = lift(s1), l2 = lift(s2);
      const PfisterResidueReport lr = pfister_residues(l1, v);
      const bool aniso = !is_isotropic(expand(s1));
      if (aniso != !lr.isotropic || (aniso && !isometric(expand(lr.first_residue), expand(s1)))) {
        r.failures.push_back(tag + "lift " + format_symbol(l1) + " does not have residue " + format_symbol(s1));
      }
      // (c) lifts separate isometry classes.
      if (isometric(expand(l1), expand(l2)) != isometric(expand(s1), expand(s2))) {
        r.failures.push_back(tag + "lifts of " + format_symbol(s1) + " and " + format_symbol(s2) +
                             " disagree on isometry");
      }
    } catch (const Error& e) {
      r.failures.push_back(tag + e.what());
    }
  }
  r.details["isotropic_inputs"] = isotropic_inputs;
  r.elapsed_ms = timer.ms();
  return r;
}

VerificationReport verify_lifting_equivalence(const FieldTower* k, int d, int m, std::size_t samples,
                                              std::uint64_t seed, const VerifyOptions& options) {
  if (m < 0 || k->outer_laurent_run() < static_cast<std::size_t>(m)) {
    fail(ErrorCode::ConfigUnsupported, k->to_string() + " does not have " + std::to_string(m) + " outer Laurent levels");
  }
  const Timer timer(options.timing);
  const FieldTower* res = m == 0 ? k : ValuationCtx(k, static_cast<std::size_t>(m)).residue_tower();
  const VerificationReport lower = check_top_d_linked(res, d, samples, derive_seed(seed, 0), options);
  const VerificationReport upper =
      m == 0 ? lower : check_top_d_linked(k, d + m, samples, derive_seed(seed, 1), options);
  VerificationReport r;
  r.theorem = "lifting-equivalence";
  r.field = k->to_string();
  r.d = d;
  r.m = m;
  r.samples = samples;
  r.seed = seed;
  r.details["residue_field"] = res->to_string();
  r.details["residue_passed"] = lower.passed();
  r.details["lifted_passed"] = upper.passed();
  r.details["residue_failures"] = lower.failures.size();
  r.details["lifted_failures"] = upper.failures.size();
  if (lower.passed() != upper.passed()) {
    r.failures.push_back("top-" + std::to_string(d) + "-linked(" + res->to_string() + ") = " +
                         (lower.passed() ? "pass" : "fail") + " but top-" + std::to_string(d + m) + "-linked(" +
                         k->to_string() + ") = " + (upper.passed() ? "pass" : "fail"));
  }
  r.elapsed_ms = timer.ms();
  return r;
}

VerificationReport verify_higher_local_d1(std::uint64_t q, std::size_t samples, std::uint64_t seed,
                                          const VerifyOptions& options) {
  const auto pk = FiniteField::split_prime_power(q);
  if (!pk) fail(ErrorCode::InvalidArgument, std::to_string(q) + " is not a prime power");
  const FieldTower* k = FieldTower::make(pk->first, pk->second, {{"X", LevelKind::RationalFunction}});
  const Timer timer(options.timing);
  VerificationReport r;
  r.theorem = "higher-local-d1";
  r.field = k->to_string();
  r.d = 1;
  r.samples = samples;
  r.seed = seed;
  std::size_t witnesses = 0, found = 0, exhausted = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    Rng rng(derive_seed(seed, i));
    const std::string tag = sample_tag(i);
    try {
      const QuadraticPfisterSymbol big = sample_symbol(k, 3, rng);
      const QuadraticForm e = expand(big);
      if (!is_isotropic_global(e)) {
        r.failures.push_back(tag + format_symbol(big) + " is anisotropic");
      } else {
        try {
          auto z = global_isotropic_vector(e, options.degree_cap);
          if (z && e.evaluate(*z).is_zero()) ++witnesses;
          else r.failures.push_back(tag + "no witness for " + format_symbol(big));
        } catch (const Error& err) {
          if (err.code() != ErrorCode::BudgetExceeded) throw;
          r.failures.push_back(tag + "witness search for " + format_symbol(big) + " exceeded the degree cap");
        }
      }
      const QuadraticPfisterSymbol p1 = sample_symbol(k, 2, rng);
      const QuadraticPfisterSymbol p2 = sample_symbol(k, 2, rng);
      if (!is_linked_pair(p1, p2, options.degree_cap)) {
        r.failures.push_back(tag + format_symbol(p1) + " and " + format_symbol(p2) + " are not linked");
      } else if (options.certificates) {
        CertificateBudget budget;
        budget.degree_cap = options.degree_cap;
        budget.seed = derive_seed(seed, samples + i);
        const CertificateSearch c = find_certificate(p1, p2, budget);
        if (c.status == CertificateSearch::Status::Found) {
          if (verify_certificate(*c.certificate, p1, p2, options.degree_cap)) ++found;
          else r.failures.push_back(tag + "certificate for " + format_symbol(p1) + " does not re-verify");
        } else if (c.status == CertificateSearch::Status::BudgetExceeded) {
          ++exhausted;
        } else {
          r.failures.push_back(tag + "no certificate for the linked pair " + format_symbol(p1) + ", " +
                               format_symbol(p2));
        }
      }
    } catch (const Error& e) {
      r.failures.push_back(tag + e.what());
    }
  }
  r.details["witnesses"] = witnesses;
  if (options.certificates) {
    r.details["certificates_found"] = found;
    r.details["certificate_budget_exhausted"] = exhausted;
  }
  r.elapsed_ms = timer.ms();
  return r;
}

}  // namespace qfl
