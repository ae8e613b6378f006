#include "qfl/pfister.hpp"

#include <algorithm>

#include "qfl/errors.hpp"
#include "qfl/fields.hpp"

namespace qfl {

QuadraticPfisterSymbol::QuadraticPfisterSymbol(const FieldTower* t, std::vector<Element> a, Element b)
    : tower(t), slots(std::move(a)), last(std::move(b)) {
  for (const auto& x : slots) {
    require_same_tower(x.tower(), t);
    if (x.is_zero()) fail(ErrorCode::ZeroArgument, "Pfister slots must be nonzero");
  }
  require_same_tower(last.tower(), t);
  if ((Element::one(t) + Element::from_int(t, 4) * last).is_zero()) {
    fail(ErrorCode::ZeroArgument, "1 + 4b must be nonzero");
  }
}

BilinearPfisterSymbol::BilinearPfisterSymbol(const FieldTower* t, std::vector<Element> a)
    : tower(t), slots(std::move(a)) {
  for (const auto& x : slots) {
    require_same_tower(x.tower(), t);
    if (x.is_zero()) fail(ErrorCode::ZeroArgument, "Pfister slots must be nonzero");
  }
}

std::string RewriteRule::to_string() const {
  switch (kind) {
    case Kind::Swap:
      return "Swap(" + std::to_string(index) + ")";
    case Kind::Merge:
      return "Merge(" + std::to_string(index) + ")";
    case Kind::SquareScale:
      return "SquareScale(" + std::to_string(index) + ", " + scalar.to_string() + ")";
  }
  return "?";
}

std::vector<Element> pfister_entries(const FieldTower* t, const std::vector<Element>& slots) {
  std::vector<Element> out{Element::one(t)};
  for (const auto& a : slots) {
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) out.push_back(-a * out[i]);
  }
  return out;
}

QuadraticForm expand(const BilinearPfisterSymbol& s) { return QuadraticForm(s.tower, pfister_entries(s.tower, s.slots)); }

QuadraticForm expand(const QuadraticPfisterSymbol& s) {
  const Element c = Element::one(s.tower) + Element::from_int(s.tower, 4) * s.last;
  return tensor(pfister_entries(s.tower, s.slots), QuadraticForm(s.tower, {Element::one(s.tower), -c}));
}

namespace {

// Applies one rule; `degenerate` reports a metabolic Merge instead of
// throwing when non-null.
BilinearPfisterSymbol apply_rule(const BilinearPfisterSymbol& s, const RewriteRule& r, bool* degenerate) {
  const std::size_t n = s.slots.size();
  const std::size_t i = r.index;
  std::vector<Element> a = s.slots;
  switch (r.kind) {
    case RewriteRule::Kind::Swap:
    case RewriteRule::Kind::Merge:
      if (i < 1 || i + 1 > n) fail(ErrorCode::RuleNotApplicable, r.to_string() + " on a " + std::to_string(n) + "-fold symbol");
      break;
    case RewriteRule::Kind::SquareScale:
      if (i < 1 || i > n) fail(ErrorCode::RuleNotApplicable, r.to_string() + " on a " + std::to_string(n) + "-fold symbol");
      break;
  }
  switch (r.kind) {
    case RewriteRule::Kind::Swap:
      std::swap(a[i - 1], a[i]);
      break;
    case RewriteRule::Kind::Merge: {
      const Element sum = a[i - 1] + a[i];
      if (sum.is_zero()) {
        if (!degenerate) fail(ErrorCode::RuleNotApplicable, "Merge(" + std::to_string(i) + ") with a_i + a_{i+1} = 0");
        *degenerate = true;
        a.back() = Element::one(s.tower);
        break;
      }
      const Element prod = -a[i - 1] * a[i];
      a[i - 1] = sum;
      a[i] = prod;
      break;
    }
    case RewriteRule::Kind::SquareScale:
      require_same_tower(r.scalar.tower(), s.tower);
      if (r.scalar.is_zero()) fail(ErrorCode::RuleNotApplicable, "SquareScale by zero");
      a[i - 1] = a[i - 1] * r.scalar * r.scalar;
      break;
  }
  return BilinearPfisterSymbol(s.tower, std::move(a));
}

void record(BilinearPfisterSymbol& cur, RewriteTrace& trace, const RewriteRule& rule, bool allow_degenerate = false) {
  bool degenerate = false;
  BilinearPfisterSymbol next = apply_rule(cur, rule, allow_degenerate ? &degenerate : nullptr);
  trace.steps.push_back({rule, cur, next, degenerate});
  cur = std::move(next);
}

}  // namespace

std::pair<BilinearPfisterSymbol, RewriteTrace> rewrite(const BilinearPfisterSymbol& s, const RewriteRule& rule) {
  BilinearPfisterSymbol cur = s;
  RewriteTrace trace;
  record(cur, trace, rule);
  return {cur, trace};
}

BilinearPfisterSymbol replay(const BilinearPfisterSymbol& s, const RewriteTrace& trace) {
  BilinearPfisterSymbol cur = s;
  for (const auto& step : trace.steps) {
    if (!(step.before == cur)) fail(ErrorCode::InvalidArgument, "trace does not start from this symbol");
    bool degenerate = false;
    cur = apply_rule(cur, step.rule, step.degenerate ? &degenerate : nullptr);
    if (degenerate != step.degenerate || !(cur == step.after)) {
      fail(ErrorCode::InvalidArgument, "trace step " + step.rule.to_string() + " does not replay");
    }
  }
  return cur;
}

std::pair<BilinearPfisterSymbol, RewriteTrace> normalize_last_slot(const BilinearPfisterSymbol& s,
                                                                   const ValuationCtx& v) {
  require_same_tower(s.tower, v.tower());
  if (s.slots.empty()) fail(ErrorCode::InvalidArgument, "empty symbol");
  BilinearPfisterSymbol cur = s;
  RewriteTrace trace;
  const std::size_t n = s.slots.size();  // last slot at 1-based position n
  // Slots before `offset` are settled; the others are the induction's a_1..a_n.
  for (std::size_t offset = 0;; ++offset) {
    const ValueVector last = v.value(cur.slots.back());
    if (v.class_of(last) == 0) {
      bool unit = true;
      ValueVector half(last.size());
      for (std::size_t i = 0; i < last.size(); ++i) {
        half[i] = -last[i] / 2;
        unit = unit && last[i] == 0;
      }
      if (!unit) record(cur, trace, RewriteRule::square_scale(n, v.monomial(half)));
      return {cur, trace};
    }
    std::vector<ValueVector> values;
    for (std::size_t i = offset; i + 1 < n; ++i) values.push_back(v.value(cur.slots[i]));
    const SpanResult span = f2_span(values, last);
    if (!span.in_span) {
      fail(ErrorCode::PreconditionSpanViolated, "class of the last slot is not in the span of the others");
    }
    // Bring a_j (j in the representing subset) next to the last slot.
    const std::size_t j = offset + span.combination.back() + 1;  // 1-based
    for (std::size_t i = j; i + 1 < n; ++i) record(cur, trace, RewriteRule::swap(i));
    record(cur, trace, RewriteRule::merge(n - 1), true);
    if (trace.steps.back().degenerate) return {cur, trace};
    // The merged slot a_j + a_n leaves the induction: park it in front.
    for (std::size_t i = n - 1; i > offset + 1; --i) record(cur, trace, RewriteRule::swap(i - 1));
  }
}

namespace {

bool is_unit(const ValuationCtx& v, const Element& x) {
  if (x.is_zero()) return false;
  for (long long e : v.value(x)) {
    if (e != 0) return false;
  }
  return true;
}

// Slots of an anisotropic bilinear symbol rewritten (isometrically) as m
// slots of F2-independent classes followed by units.
std::pair<std::vector<Element>, std::size_t> independent_presentation(const FieldTower* t, std::vector<Element> a,
                                                                      const ValuationCtx& v) {
  std::size_t m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const ValueVector vi = v.value(a[i]);
    std::vector<ValueVector> front;
    for (std::size_t k = 0; k < m; ++k) front.push_back(v.value(a[k]));
    std::rotate(a.begin() + m, a.begin() + i, a.begin() + i + 1);
    if (!f2_span(front, vi).in_span) {
      ++m;
      continue;
    }
    if (is_unit(v, a[m])) continue;
    // Anisotropy keeps the normalized prefix independent with the same span.
    std::vector<Element> sub(a.begin(), a.begin() + m + 1);
    const BilinearPfisterSymbol normalized = normalize_last_slot(BilinearPfisterSymbol(t, sub), v).first;
    std::copy(normalized.slots.begin(), normalized.slots.end(), a.begin());
  }
  std::vector<ValueVector> front;
  for (std::size_t k = 0; k < m; ++k) {
    if (f2_span(front, v.value(a[k])).in_span) fail(ErrorCode::Internal, "slot classes became dependent");
    front.push_back(v.value(a[k]));
  }
  for (std::size_t k = m; k < a.size(); ++k) {
    if (!is_unit(v, a[k])) fail(ErrorCode::Internal, "dependent slot is not a unit");
  }
  return {std::move(a), m};
}

}  // namespace

QuadraticPfisterSymbol good_slot_presentation(const QuadraticPfisterSymbol& s, const ValuationCtx& v) {
  require_same_tower(s.tower, v.tower());
  const FieldTower* t = s.tower;
  const Element one = Element::one(t);
  const Element c = one + Element::from_int(t, 4) * s.last;
  if (is_unit(v, s.last) && is_unit(v, c)) return s;
  const FiniteField& f = t->base();
  if (is_isotropic(expand(s))) {
    // Isotropic Pfister forms are hyperbolic.
    if (!s.slots.empty()) {
      const Element b = Element::from_int(t, f.characteristic() == 5 ? 2 : 1);
      return QuadraticPfisterSymbol(t, std::vector<Element>(s.slots.size(), one), b);
    }
    // <<b]] with 1 + 4b = u^2, u a unit whose residue squares to neither 0 nor 1.
    const FieldTower* r = v.residue_tower();
    if (r->is_finite()) {
      for (FiniteField::Elem x = 2; x < f.order(); ++x) {
        const FiniteField::Elem sq = f.mul(x, x);
        if (sq == 1) continue;
        const Element u = Element::scalar(t, x);
        return QuadraticPfisterSymbol(t, {}, (u * u - one) / Element::from_int(t, 4));
      }
    } else {
      // A non-finite residue tower contains the symbol t_1 of its outer level.
      const Element u = one + Element::variable(t, 0);
      return QuadraticPfisterSymbol(t, {}, (u * u - one) / Element::from_int(t, 4));
    }
    fail(ErrorCode::NoGoodSlot, "the residue field has no square other than 0 and 1");
  }
  // Anisotropic: <<a, 1+4b>> as a bilinear symbol; any unit slot u has
  // residue != 1, so b' = (u - 1)/4 and 1 + 4b' = u are units.
  std::vector<Element> slots = s.slots;
  slots.push_back(c);
  auto [a, m] = independent_presentation(t, std::move(slots), v);
  if (m == a.size()) fail(ErrorCode::NoGoodSlot, "all slot values are F2-independent; no unit slot exists");
  const Element u = a.back();
  a.pop_back();
  return QuadraticPfisterSymbol(t, std::move(a), (u - one) / Element::from_int(t, 4));
}

PfisterResidueReport pfister_residues(const QuadraticPfisterSymbol& s, const ValuationCtx& v) {
  require_same_tower(s.tower, v.tower());
  const FieldTower* t = s.tower;
  PfisterResidueReport out;
  out.presentation = s;
  if (is_isotropic(expand(s))) {
    out.isotropic = true;
    for (std::size_t m = 0; m < v.class_count(); ++m) out.zero_masks.push_back(m);
    return out;
  }
  const QuadraticPfisterSymbol good = good_slot_presentation(s, v);
  auto [a, m] = independent_presentation(t, good.slots, v);
  out.presentation = QuadraticPfisterSymbol(t, a, good.last);
  out.m = m;
  const FieldTower* r = v.residue_tower();
  std::vector<Element> units;
  for (std::size_t i = m; i < a.size(); ++i) units.push_back(v.residue(a[i]));
  out.first_residue = QuadraticPfisterSymbol(r, units, v.residue(good.last));
  std::vector<bool> met(v.class_count(), false);
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    ResidueCoset coset;
    Element prod = Element::one(t);
    for (std::size_t i = 0; i < m; ++i) {
      if ((mask >> i) & 1) {
        coset.subset.push_back(i);
        prod *= a[i];
      }
    }
    coset.representative = prod;
    coset.mask = v.class_of(prod);
    coset.multiplier = v.angular_component(coset.subset.size() % 2 ? -prod : prod);
    met[coset.mask] = true;
    out.cosets.push_back(std::move(coset));
  }
  for (std::size_t mask = 0; mask < met.size(); ++mask) {
    if (!met[mask]) out.zero_masks.push_back(mask);
  }
  return out;
}

}  // namespace qfl
