#include "qfl/valuation.hpp"

#include "qfl/errors.hpp"

namespace qfl {

ValuationCtx::ValuationCtx(const FieldTower* tower, std::size_t rank) : tower_(tower), rank_(rank) {
  if (rank == 0) fail(ErrorCode::UnsupportedLevel, "valuation of rank 0");
  if (tower->outer_laurent_run() < rank) {
    fail(ErrorCode::UnsupportedLevel,
         tower->to_string() + " does not have " + std::to_string(rank) + " outer Laurent levels");
  }
}

ValuationCtx ValuationCtx::full(const FieldTower* tower) { return ValuationCtx(tower, tower->outer_laurent_run()); }

ValueVector ValuationCtx::value(const Element& a) const {
  require_same_tower(a.tower(), tower_);
  if (a.is_zero()) fail(ErrorCode::ZeroArgument, "valuation of zero");
  ValueVector out;
  Element cur = a;
  for (std::size_t i = 0; i < rank_; ++i) {
    out.push_back(outer_order(cur));
    cur = qfl::angular_component(cur);
  }
  return out;
}

Element ValuationCtx::angular_component(const Element& a) const {
  require_same_tower(a.tower(), tower_);
  Element cur = a;
  for (std::size_t i = 0; i < rank_; ++i) cur = qfl::angular_component(cur);
  return cur;
}

Element ValuationCtx::residue(const Element& a) const {
  if (a.is_zero()) return Element::zero(residue_tower());
  for (long long x : value(a)) {
    if (x != 0) fail(ErrorCode::NotIntegralUnit, a.to_string() + " is not a unit");
  }
  return angular_component(a);
}

Element ValuationCtx::monomial(const ValueVector& e) const {
  Element out = Element::one(tower_);
  for (std::size_t i = 0; i < rank_ && i < e.size(); ++i) {
    if (e[i] != 0) out *= Element::variable(tower_, level_of_component(i)).pow(e[i]);
  }
  return out;
}

std::size_t ValuationCtx::class_of(const ValueVector& v) const {
  std::size_t mask = 0;
  for (std::size_t i = 0; i < rank_; ++i) {
    if (((v[i] % 2) + 2) % 2 == 1) mask |= std::size_t{1} << i;
  }
  return mask;
}

Element ValuationCtx::coset_rep(std::size_t mask) const {
  ValueVector e(rank_, 0);
  for (std::size_t i = 0; i < rank_; ++i) e[i] = (mask >> i) & 1;
  return monomial(e);
}

ValuationCtx compose(const ValuationCtx& v_outer, const ValuationCtx& v_inner) {
  if (v_inner.tower() != v_outer.residue_tower()) {
    fail(ErrorCode::TowerMismatch, "inner valuation must live on " + v_outer.residue_tower()->to_string());
  }
  return ValuationCtx(v_outer.tower(), v_outer.rank() + v_inner.rank());
}

const QuadraticForm* ResidueDecomposition::part_for_mask(std::size_t mask) const {
  for (std::size_t i = 0; i < masks.size(); ++i) {
    if (masks[i] == mask) return &parts[i];
  }
  return nullptr;
}

ResidueDecomposition residue_parts(const QuadraticForm& q, const ValuationCtx& v) {
  require_same_tower(q.tower(), v.tower());
  std::vector<std::vector<Element>> groups(v.class_count());
  std::vector<bool> met(v.class_count(), false);
  for (const auto& d : q.diag()) {
    const std::size_t mask = v.class_of(d);
    met[mask] = true;
    groups[mask].push_back(v.angular_component(d));
  }
  ResidueDecomposition out;
  for (std::size_t m = 0; m < groups.size(); ++m) {
    if (!met[m]) continue;
    out.masks.push_back(m);
    out.coset_reps.push_back(v.coset_rep(m));
    out.parts.emplace_back(v.residue_tower(), std::move(groups[m]));
  }
  return out;
}

ResidueDecomposition springer_decompose(const QuadraticForm& q, const ValuationCtx& v) {
  ResidueDecomposition out = residue_parts(q, v);
  for (auto& part : out.parts) part = witt_decompose(part).anisotropic_kernel;
  return out;
}

QuadraticForm residue_form(const QuadraticForm& q, const ValuationCtx& v, const Element& pi) {
  if (pi.is_zero()) fail(ErrorCode::ZeroArgument, "residue form at zero");
  const ResidueDecomposition dec = springer_decompose(q, v);
  const QuadraticForm* part = dec.part_for_mask(v.class_of(pi));
  if (!part) return QuadraticForm(v.residue_tower());
  // q = rep * <u_i> = pi * <(rep/pi) u_i>, and rep has angular component 1.
  return scaled(*part, v.angular_component(pi).inverse());
}

namespace {

// Power series coefficients of a (outer order >= 0) modulo s^n.
std::vector<Element> series(const Element& a, int n) {
  const FieldTower* c = a.tower()->inner();
  std::vector<Element> out(n, Element::zero(c));
  if (a.is_zero()) return out;
  std::vector<Element> num = a.numerator();
  std::vector<Element> den = a.denominator();
  num.resize(std::max<std::size_t>(num.size(), n), Element::zero(c));
  den.resize(std::max<std::size_t>(den.size(), n), Element::zero(c));
  const Element d0 = den[0].inverse();
  for (int i = 0; i < n; ++i) {
    Element acc = num[i];
    for (int j = 1; j <= i; ++j) acc -= den[j] * out[i - j];
    out[i] = acc * d0;
  }
  return out;
}

std::vector<Element> series_mul(const std::vector<Element>& a, const std::vector<Element>& b, int n) {
  const FieldTower* c = a[0].tower();
  std::vector<Element> out(n, Element::zero(c));
  for (int i = 0; i < n; ++i) {
    if (a[i].is_zero()) continue;
    for (int j = 0; i + j < n; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

std::vector<Element> series_inv(const std::vector<Element>& a, int n) {
  const FieldTower* c = a[0].tower();
  std::vector<Element> out(n, Element::zero(c));
  const Element a0 = a[0].inverse();
  for (int i = 0; i < n; ++i) {
    Element acc = i == 0 ? Element::one(c) : Element::zero(c);
    for (int j = 1; j <= i; ++j) acc -= a[j] * out[i - j];
    out[i] = acc * a0;
  }
  return out;
}

}  // namespace

HenselLift hensel_lift_isotropic(const QuadraticForm& q, const ValuationCtx& v, const Vector& witness,
                                 const HenselOptions& options) {
  const FieldTower* t = q.tower();
  require_same_tower(t, v.tower());
  if (v.rank() != 1) fail(ErrorCode::UnsupportedLevel, "Hensel lifting uses a rank-1 valuation");
  const FieldTower* r = v.residue_tower();
  if (witness.size() != q.dim()) fail(ErrorCode::WitnessInvalid, "witness length does not match the form");
  std::vector<Element> units;
  for (const auto& d : q.diag()) {
    if (outer_order(d) != 0) fail(ErrorCode::WitnessInvalid, "form entries must be units");
    units.push_back(v.residue(d));
  }
  QuadraticForm qbar(r, units);
  std::size_t j = q.dim();
  for (std::size_t i = 0; i < witness.size(); ++i) {
    require_same_tower(witness[i].tower(), r);
    if (j == q.dim() && !witness[i].is_zero()) j = i;
  }
  if (j == q.dim()) fail(ErrorCode::WitnessInvalid, "witness is zero");
  if (!qbar.evaluate(witness).is_zero()) fail(ErrorCode::WitnessInvalid, "witness is not isotropic for the residue form");

  Vector x;
  for (const auto& w : witness) x.push_back(w.lift(t));
  HenselLift out;
  const Element a = q.evaluate(x);
  if (a.is_zero()) {
    out.z = x;
    return out;
  }
  // q(x + T e_j) = A + 2 B T + C T^2 with B = d_j x_j, C = d_j.
  const Element b = q[j] * x[j];
  const Element c = q[j];
  const Element disc = b * b - a * c;
  const Element bbar = v.residue(b);
  auto finish = [&](const Element& root) {
    const Element tt = (root - b) / c;
    out.z = x;
    out.z[j] += tt;
  };
  if (auto root = exact_sqrt(disc)) {
    Element rt = *root;
    if (v.residue(rt) != bbar) rt = -rt;
    finish(rt);
    out.exact = true;
    if (!q.evaluate(out.z).is_zero()) fail(ErrorCode::Internal, "exact Hensel lift failed");
    return out;
  }
  // Newton iteration for sqrt(disc) on truncated series.
  const int n = std::max(options.precision, 1);
  const std::vector<Element> dser = series(disc, n);
  std::vector<Element> root(n, Element::zero(r));
  root[0] = bbar;
  for (int prec = 1; prec < n; prec *= 2) {
    // root <- (root + disc / root) / 2
    std::vector<Element> quotient = series_mul(dser, series_inv(root, n), n);
    const Element half = Element::from_int(r, 2).inverse();
    for (int i = 0; i < n; ++i) root[i] = (root[i] + quotient[i]) * half;
  }
  Element rt = Element::fraction(t, root, {Element::one(r)});
  finish(rt);
  out.exact = q.evaluate(out.z).is_zero();
  out.precision = n;
  const Element value = q.evaluate(out.z);
  if (!value.is_zero() && outer_order(value) < n) fail(ErrorCode::Internal, "Newton lift did not reach the precision");
  return out;
}

SpanResult f2_span(const std::vector<ValueVector>& vectors, const ValueVector& target) {
  // Gaussian elimination over F2 on parity bit masks, tracking which input
  // vectors each reduced row combines.
  auto to_mask = [](const ValueVector& v) {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (((v[i] % 2) + 2) % 2 == 1) m |= std::uint64_t{1} << i;
    }
    return m;
  };
  struct Row {
    std::uint64_t bits;
    std::uint64_t pivot;
    std::vector<bool> combo;
  };
  auto absorb = [](std::uint64_t& bits, std::vector<bool>& combo, const Row& b) {
    bits ^= b.bits;
    for (std::size_t i = 0; i < combo.size(); ++i) combo[i] = combo[i] != b.combo[i];
  };
  SpanResult out;
  std::vector<Row> rows;
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    Row r{to_mask(vectors[k]), 0, std::vector<bool>(vectors.size(), false)};
    r.combo[k] = true;
    for (const auto& b : rows) {
      if (r.bits & b.pivot) absorb(r.bits, r.combo, b);
    }
    if (r.bits == 0) continue;
    r.pivot = r.bits & (~r.bits + 1);
    for (auto& b : rows) {
      if (b.bits & r.pivot) absorb(b.bits, b.combo, r);
    }
    rows.push_back(std::move(r));
    out.basis.push_back(k);
  }
  std::uint64_t tbits = to_mask(target);
  std::vector<bool> combo(vectors.size(), false);
  for (const auto& b : rows) {
    if (tbits & b.pivot) absorb(tbits, combo, b);
  }
  out.in_span = tbits == 0;
  if (out.in_span) {
    for (std::size_t i = 0; i < combo.size(); ++i) {
      if (combo[i]) out.combination.push_back(i);
    }
  }
  return out;
}

}  // namespace qfl
