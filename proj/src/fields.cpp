#include "qfl/fields.hpp"

#include "qfl/errors.hpp"

namespace qfl {

namespace {

using detail::Poly;
using detail::Value;

std::size_t low_index(const FieldTower* c, const Poly& p) {
  std::size_t i = 0;
  while (i < p.size() && detail::is_zero(c, p[i])) ++i;
  return i;
}

// Square root of a polynomial over the coefficient field c whose leading
// coefficient has root `lead_root`, or nullopt.
std::optional<Poly> poly_sqrt(const FieldTower* c, const Poly& a, const Value& lead_root) {
  if (a.empty()) return Poly{};
  const std::size_t n = a.size() - 1;
  if (n % 2 != 0) return std::nullopt;
  const std::size_t m = n / 2;
  Poly s(m + 1);
  s[m] = lead_root;
  const Value inv2 = detail::inv(c, detail::add(c, lead_root, lead_root));
  for (std::size_t k = 1; k <= m; ++k) {
    Value acc = a[2 * m - k];
    for (std::size_t i = m - k + 1; i + 1 <= m; ++i) {
      const std::size_t j = 2 * m - k - i;
      if (j <= m - k || j + 1 > m) continue;
      acc = detail::sub(c, acc, detail::mul(c, s[i], s[j]));
    }
    s[m - k] = detail::mul(c, acc, inv2);
  }
  if (!detail::poly_equal(c, detail::poly_mul(c, s, s), a)) return std::nullopt;
  return s;
}

bool is_square_rational(const Element& a) {
  const FieldTower* t = a.tower();
  const FieldTower* c = t->inner();
  const auto& fr = detail::fraction(a.raw());
  if (c->is_finite()) {
    const FiniteField& f = c->base();
    FqPoly num, den;
    for (const auto& v : fr.num) num.push_back(v.s);
    for (const auto& v : fr.den) den.push_back(v.s);
    FqPoly prod = fq::mul(f, num, den);
    if (fq::degree(prod) % 2 != 0) return false;
    if (!f.is_square(prod.back())) return false;
    return fq::sqrt_exact(f, fq::monic(f, prod)).has_value();
  }
  Poly prod = detail::poly_mul(c, fr.num, fr.den);
  if ((prod.size() - 1) % 2 != 0) return false;
  const Element lead(c, prod.back());
  if (!is_square(lead)) return false;
  Poly mon = detail::poly_scale(c, prod, detail::inv(c, prod.back()));
  return poly_sqrt(c, mon, c->one()).has_value();
}

}  // namespace

long long outer_order(const Element& a) {
  const FieldTower* t = a.tower();
  if (t->depth() == 0) fail(ErrorCode::UnsupportedLevel, "finite field has no valuation");
  if (a.is_zero()) fail(ErrorCode::ZeroArgument, "valuation of zero");
  const auto& fr = detail::fraction(a.raw());
  const FieldTower* c = t->inner();
  return static_cast<long long>(low_index(c, fr.num)) - static_cast<long long>(low_index(c, fr.den));
}

Element angular_component(const Element& a) {
  const FieldTower* t = a.tower();
  if (t->depth() == 0) fail(ErrorCode::UnsupportedLevel, "finite field has no valuation");
  if (a.is_zero()) fail(ErrorCode::ZeroArgument, "angular component of zero");
  const auto& fr = detail::fraction(a.raw());
  const FieldTower* c = t->inner();
  const Value& n = fr.num[low_index(c, fr.num)];
  const Value& d = fr.den[low_index(c, fr.den)];
  return Element(c, detail::div(c, n, d));
}

ValueVector valuation(const Element& a) {
  if (a.is_zero()) fail(ErrorCode::ZeroArgument, "valuation of zero");
  if (a.tower()->laurent_count() == 0) fail(ErrorCode::UnsupportedLevel, a.tower()->to_string() + " has no Laurent level");
  ValueVector out;
  Element cur = a;
  while (cur.tower()->depth() > 0) {
    if (cur.tower()->outer_is_rational()) {
      if (!cur.is_constant()) {
        fail(ErrorCode::UnsupportedLevel, "element involves the rational level " + cur.tower()->outer().symbol);
      }
      cur = cur.constant_value();
      continue;
    }
    out.push_back(outer_order(cur));
    cur = angular_component(cur);
  }
  return out;
}

Element residue(const Element& a) {
  const FieldTower* t = a.tower();
  if (!t->outer_is_laurent()) fail(ErrorCode::UnsupportedLevel, "outer level is not a Laurent series level");
  if (a.is_zero()) return Element::zero(t->inner());
  if (outer_order(a) != 0) {
    fail(ErrorCode::NotIntegralUnit, a.to_string() + " has valuation " + std::to_string(outer_order(a)));
  }
  return angular_component(a);
}

bool is_square(const Element& a) {
  if (a.is_zero()) fail(ErrorCode::ZeroArgument, "square test of zero");
  const FieldTower* t = a.tower();
  if (t->is_finite()) return t->base().is_square(a.scalar_value());
  if (t->outer_is_laurent()) {
    if (outer_order(a) % 2 != 0) return false;
    return is_square(angular_component(a));
  }
  return is_square_rational(a);
}

std::optional<Element> exact_sqrt(const Element& a) {
  const FieldTower* t = a.tower();
  if (a.is_zero()) return a;
  if (t->is_finite()) {
    auto s = t->base().sqrt(a.scalar_value());
    if (!s) return std::nullopt;
    return Element(t, Value{*s, nullptr});
  }
  const FieldTower* c = t->inner();
  const auto& fr = detail::fraction(a.raw());
  Poly prod = detail::poly_mul(c, fr.num, fr.den);
  auto lead_root = exact_sqrt(Element(c, prod.back()));
  if (!lead_root) return std::nullopt;
  auto s = poly_sqrt(c, prod, lead_root->raw());
  if (!s) return std::nullopt;
  return Element(t, detail::make_fraction(t, std::move(*s), fr.den));
}

Element canonical_square_class(const Element& a) {
  if (a.is_zero()) fail(ErrorCode::ZeroArgument, "square class of zero");
  const FieldTower* t = a.tower();
  if (t->is_finite()) {
    const FiniteField& f = t->base();
    return Element(t, Value{f.is_square(a.scalar_value()) ? f.one() : f.nonsquare(), nullptr});
  }
  const FieldTower* c = t->inner();
  if (t->outer_is_laurent()) {
    const long long e = ((outer_order(a) % 2) + 2) % 2;
    Element rep = canonical_square_class(angular_component(a)).lift(t);
    if (e == 1) rep *= Element::variable(t, t->depth() - 1);
    return rep;
  }
  const auto& fr = detail::fraction(a.raw());
  if (c->is_finite()) {
    const FiniteField& f = c->base();
    FqPoly num, den;
    for (const auto& v : fr.num) num.push_back(v.s);
    for (const auto& v : fr.den) den.push_back(v.s);
    FqPoly prod = fq::mul(f, num, den);
    const FiniteField::Elem unit = f.is_square(prod.back()) ? f.one() : f.nonsquare();
    FqPoly kernel = fq::scale(f, fq::squarefree_kernel(f, prod), unit);
    return from_fq_poly(t, kernel);
  }
  return Element(t, detail::make_fraction(t, detail::poly_mul(c, fr.num, fr.den), Poly{c->one()}));
}

FqPoly to_fq_poly(const std::vector<Element>& coeffs) {
  FqPoly out;
  for (const auto& e : coeffs) out.push_back(e.scalar_value());
  fq::trim(out);
  return out;
}

Element from_fq_poly(const FieldTower* tower, const FqPoly& num, const FqPoly& den) {
  if (tower->depth() != 1) fail(ErrorCode::UnsupportedLevel, "expected a one-level tower");
  Poly n, d;
  for (auto v : num) n.push_back(Value{v, nullptr});
  for (auto v : den) d.push_back(Value{v, nullptr});
  return Element(tower, detail::make_fraction(tower, std::move(n), std::move(d)));
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

std::uint64_t uniform(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
  return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
}

Element sample_nonzero_base(const FieldTower* t, Rng& rng) {
  return Element::scalar(t, static_cast<FiniteField::Elem>(uniform(rng, 1, t->base().order() - 1)));
}

Element sample_any(const FieldTower* t, const SampleBudget& budget, Rng& rng) {
  if (uniform(rng, 0, 2) == 0) return Element::zero(t);
  return sample(t, budget, rng);
}

}  // namespace

Element sample_polynomial(const FieldTower* t, int max_degree, Rng& rng) {
  if (t->is_finite()) return sample_nonzero_base(t, rng);
  const FieldTower* c = t->inner();
  SampleBudget inner_budget;
  inner_budget.max_degree = max_degree;
  const auto deg = static_cast<int>(uniform(rng, 0, static_cast<std::uint64_t>(std::max(max_degree, 0))));
  std::vector<Element> num;
  for (int i = 0; i <= deg; ++i) {
    const bool must = (i == deg) || (i == 0 && t->outer_is_laurent());
    num.push_back(must ? sample(c, inner_budget, rng) : sample_any(c, inner_budget, rng));
  }
  return Element::fraction(t, num, {Element::one(c)});
}

Element sample(const FieldTower* t, const SampleBudget& budget, Rng& rng) {
  if (t->is_finite()) return sample_nonzero_base(t, rng);
  const FieldTower* c = t->inner();
  if (t->outer_is_laurent()) {
    const auto v = static_cast<long long>(uniform(rng, 0, 2 * static_cast<std::uint64_t>(budget.max_valuation))) -
                   budget.max_valuation;
    Element unit = sample_polynomial(t, budget.max_degree, rng);
    if (uniform(rng, 0, 3) == 0) {
      unit /= Element::one(t) + sample_nonzero_base(t, rng) * Element::variable(t, t->depth() - 1);
    }
    return unit * Element::variable(t, t->depth() - 1).pow(v);
  }
  Element num = sample_polynomial(t, budget.max_degree, rng);
  if (uniform(rng, 0, 3) == 0) {
    Element x = Element::variable(t, t->depth() - 1);
    num /= x + sample_any(c, budget, rng).lift(t);
  }
  return num;
}

Element sample(const FieldTower* t, const SampleBudget& budget, std::uint64_t seed) {
  Rng rng(seed);
  return sample(t, budget, rng);
}

}  // namespace qfl
