#include "qfl/tower.hpp"

#include <map>
#include <mutex>
#include <set>

#include "qfl/errors.hpp"

namespace qfl {

namespace detail {

namespace {

const FiniteField& base_of(const FieldTower* t) { return t->base(); }

Value wrap(Poly num, Poly den) {
  auto r = std::make_shared<RatFn>();
  r->num = std::move(num);
  r->den = std::move(den);
  return Value{0, std::move(r)};
}

bool is_one_poly(const FieldTower* c, const Poly& p) { return p.size() == 1 && equal(c, p[0], c->one()); }

}  // namespace

bool is_zero(const FieldTower* t, const Value& a) { return t->depth() == 0 ? a.s == 0 : a.r == nullptr; }

Value zero_value() { return Value{}; }

Value one_value(const FieldTower* t) { return t->one(); }

const RatFn& fraction(const Value& a) { return *a.r; }

bool poly_equal(const FieldTower* c, const Poly& a, const Poly& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!equal(c, a[i], b[i])) return false;
  }
  return true;
}

bool equal(const FieldTower* t, const Value& a, const Value& b) {
  if (t->depth() == 0) return a.s == b.s;
  if (!a.r || !b.r) return !a.r && !b.r;
  if (a.r == b.r) return true;
  const FieldTower* c = t->inner();
  return poly_equal(c, a.r->num, b.r->num) && poly_equal(c, a.r->den, b.r->den);
}

namespace {

int compare_poly(const FieldTower* c, const Poly& a, const Poly& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (std::size_t i = a.size(); i-- > 0;) {
    int r = compare(c, a[i], b[i]);
    if (r != 0) return r;
  }
  return 0;
}

}  // namespace

int compare(const FieldTower* t, const Value& a, const Value& b) {
  if (t->depth() == 0) return a.s == b.s ? 0 : (a.s < b.s ? -1 : 1);
  if (!a.r || !b.r) return (a.r ? 1 : 0) - (b.r ? 1 : 0);
  const FieldTower* c = t->inner();
  const std::size_t da = a.r->num.size() + a.r->den.size();
  const std::size_t db = b.r->num.size() + b.r->den.size();
  if (da != db) return da < db ? -1 : 1;
  int r = compare_poly(c, a.r->den, b.r->den);
  if (r != 0) return r;
  return compare_poly(c, a.r->num, b.r->num);
}

void trim(const FieldTower* c, Poly& p) {
  while (!p.empty() && is_zero(c, p.back())) p.pop_back();
}

Poly poly_add(const FieldTower* c, const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i >= a.size()) r[i] = b[i];
    else if (i >= b.size()) r[i] = a[i];
    else r[i] = add(c, a[i], b[i]);
  }
  trim(c, r);
  return r;
}

Poly poly_sub(const FieldTower* c, const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i >= a.size()) r[i] = neg(c, b[i]);
    else if (i >= b.size()) r[i] = a[i];
    else r[i] = sub(c, a[i], b[i]);
  }
  trim(c, r);
  return r;
}

Poly poly_mul(const FieldTower* c, const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  if (c->depth() == 0) {
    const FiniteField& f = c->base();
    Poly r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].s == 0) continue;
      for (std::size_t j = 0; j < b.size(); ++j) {
        r[i + j].s = f.add(r[i + j].s, f.mul(a[i].s, b[j].s));
      }
    }
    trim(c, r);
    return r;
  }
  Poly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (is_zero(c, a[i])) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (is_zero(c, b[j])) continue;
      r[i + j] = add(c, r[i + j], mul(c, a[i], b[j]));
    }
  }
  trim(c, r);
  return r;
}

Poly poly_scale(const FieldTower* c, const Poly& a, const Value& s) {
  if (is_zero(c, s)) return {};
  Poly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = mul(c, a[i], s);
  return r;
}

void poly_divmod(const FieldTower* c, const Poly& a, const Poly& b, Poly* quot, Poly* rem) {
  if (b.empty()) fail(ErrorCode::DivisionByZero, "polynomial division by zero");
  Poly r = a;
  Poly q;
  if (r.size() >= b.size()) q.assign(r.size() - b.size() + 1, Value{});
  const Value lead_inv = inv(c, b.back());
  const bool monic = equal(c, b.back(), c->one());
  while (r.size() >= b.size()) {
    const std::size_t shift = r.size() - b.size();
    const Value coef = monic ? r.back() : mul(c, r.back(), lead_inv);
    q[shift] = coef;
    for (std::size_t i = 0; i < b.size(); ++i) {
      r[shift + i] = sub(c, r[shift + i], mul(c, coef, b[i]));
    }
    r.pop_back();
    trim(c, r);
  }
  if (quot) {
    trim(c, q);
    *quot = std::move(q);
  }
  if (rem) *rem = std::move(r);
}

namespace {

// Index of the lowest nonzero coefficient.
std::size_t low_order(const FieldTower* c, const Poly& p) {
  std::size_t k = 0;
  while (k < p.size() && is_zero(c, p[k])) ++k;
  return k;
}

bool is_monomial(const FieldTower* c, const Poly& p) { return !p.empty() && low_order(c, p) + 1 == p.size(); }

Poly monic_power(const FieldTower* c, std::size_t k) {
  Poly r(k + 1);
  r[k] = c->one();
  return r;
}

}  // namespace

Poly poly_gcd(const FieldTower* c, const Poly& a, const Poly& b) {
  if (a.empty() && b.empty()) return {};
  if (is_monomial(c, a) && !b.empty()) return monic_power(c, std::min(a.size() - 1, low_order(c, b)));
  if (is_monomial(c, b) && !a.empty()) return monic_power(c, std::min(b.size() - 1, low_order(c, a)));
  Poly x = a, y = b;
  while (!y.empty()) {
    if (y.size() == 1) return Poly{c->one()};
    Poly r;
    poly_divmod(c, x, y, nullptr, &r);
    x = std::move(y);
    y = std::move(r);
  }
  if (x.empty()) return x;
  return poly_scale(c, x, inv(c, x.back()));
}

namespace {

void cancel_common(const FieldTower* c, Poly& a, Poly& b) {
  if (a.size() <= 1 && low_order(c, a) == 0) return;
  if (b.size() <= 1) return;
  const Poly g = poly_gcd(c, a, b);
  if (g.size() > 1) {
    poly_divmod(c, a, g, &a, nullptr);
    poly_divmod(c, b, g, &b, nullptr);
  }
}

// num/den already coprime; makes den monic.
Value normalized(const FieldTower* c, Poly num, Poly den) {
  if (!equal(c, den.back(), c->one())) {
    const Value li = inv(c, den.back());
    num = poly_scale(c, num, li);
    den = poly_scale(c, den, li);
  }
  return wrap(std::move(num), std::move(den));
}

}  // namespace

Value make_fraction(const FieldTower* t, Poly num, Poly den) {
  const FieldTower* c = t->inner();
  trim(c, num);
  trim(c, den);
  if (den.empty()) fail(ErrorCode::DivisionByZero, "zero denominator");
  if (num.empty()) return Value{};
  if (den.size() > 1) {
    Poly g = poly_gcd(c, num, den);
    if (g.size() > 1) {
      poly_divmod(c, num, g, &num, nullptr);
      poly_divmod(c, den, g, &den, nullptr);
    }
  }
  if (!equal(c, den.back(), c->one())) {
    const Value li = inv(c, den.back());
    num = poly_scale(c, num, li);
    den = poly_scale(c, den, li);
  }
  return wrap(std::move(num), std::move(den));
}

Value from_int(const FieldTower* t, long long n) {
  if (t->depth() == 0) return Value{t->base().from_int(n), nullptr};
  Value inner = from_int(t->inner(), n);
  if (is_zero(t->inner(), inner)) return Value{};
  return wrap(Poly{inner}, Poly{t->inner()->one()});
}

Value add(const FieldTower* t, const Value& a, const Value& b) {
  if (t->depth() == 0) return Value{base_of(t).add(a.s, b.s), nullptr};
  if (!a.r) return b;
  if (!b.r) return a;
  const FieldTower* c = t->inner();
  const RatFn& x = *a.r;
  const RatFn& y = *b.r;
  if (poly_equal(c, x.den, y.den)) {
    Poly num = poly_add(c, x.num, y.num);
    if (num.empty()) return Value{};
    if (is_one_poly(c, x.den)) return wrap(std::move(num), x.den);
    return make_fraction(t, std::move(num), x.den);
  }
  // Henrici: with d = gcd(den_x, den_y) only gcd(num, d) can cancel.
  const Poly d = poly_gcd(c, x.den, y.den);
  Poly xd = x.den, yd = y.den;
  if (d.size() > 1) {
    poly_divmod(c, x.den, d, &xd, nullptr);
    poly_divmod(c, y.den, d, &yd, nullptr);
  }
  Poly num = poly_add(c, poly_mul(c, x.num, yd), poly_mul(c, y.num, xd));
  if (num.empty()) return Value{};
  Poly den = poly_mul(c, x.den, yd);
  if (d.size() > 1) {
    const Poly g = poly_gcd(c, num, d);
    if (g.size() > 1) {
      poly_divmod(c, num, g, &num, nullptr);
      poly_divmod(c, den, g, &den, nullptr);
    }
  }
  return normalized(c, std::move(num), std::move(den));
}

Value neg(const FieldTower* t, const Value& a) {
  if (t->depth() == 0) return Value{base_of(t).neg(a.s), nullptr};
  if (!a.r) return a;
  const FieldTower* c = t->inner();
  Poly num(a.r->num.size());
  for (std::size_t i = 0; i < num.size(); ++i) num[i] = neg(c, a.r->num[i]);
  return wrap(std::move(num), a.r->den);
}

Value sub(const FieldTower* t, const Value& a, const Value& b) {
  if (t->depth() == 0) return Value{base_of(t).sub(a.s, b.s), nullptr};
  return add(t, a, neg(t, b));
}

Value mul(const FieldTower* t, const Value& a, const Value& b) {
  if (t->depth() == 0) return Value{base_of(t).mul(a.s, b.s), nullptr};
  if (!a.r || !b.r) return Value{};
  const FieldTower* c = t->inner();
  const RatFn& x = *a.r;
  const RatFn& y = *b.r;
  const bool xpoly = is_one_poly(c, x.den);
  const bool ypoly = is_one_poly(c, y.den);
  if (xpoly && ypoly) return wrap(poly_mul(c, x.num, y.num), x.den);
  if (x.num.size() == 1 && xpoly) {
    return wrap(poly_scale(c, y.num, x.num[0]), y.den);
  }
  if (y.num.size() == 1 && ypoly) {
    return wrap(poly_scale(c, x.num, y.num[0]), x.den);
  }
  // Both inputs are reduced, so cross-cancelling leaves a reduced product.
  Poly xn = x.num, xd = x.den, yn = y.num, yd = y.den;
  cancel_common(c, xn, yd);
  cancel_common(c, yn, xd);
  return normalized(c, poly_mul(c, xn, yn), poly_mul(c, xd, yd));
}

Value inv(const FieldTower* t, const Value& a) {
  if (t->depth() == 0) return Value{base_of(t).inv(a.s), nullptr};
  if (!a.r) fail(ErrorCode::DivisionByZero, "inverse of zero");
  const FieldTower* c = t->inner();
  Poly num = a.r->den;
  Poly den = a.r->num;
  if (!equal(c, den.back(), c->one())) {
    const Value li = inv(c, den.back());
    num = poly_scale(c, num, li);
    den = poly_scale(c, den, li);
  }
  return wrap(std::move(num), std::move(den));
}

Value div(const FieldTower* t, const Value& a, const Value& b) {
  if (is_zero(t, b)) fail(ErrorCode::DivisionByZero, "division by zero");
  return mul(t, a, inv(t, b));
}

Value embed(const FieldTower* from, const FieldTower* to, Value v) {
  if (!to->has_prefix(from)) fail(ErrorCode::TowerMismatch, from->to_string() + " is not a subfield of " + to->to_string());
  for (std::size_t d = from->depth(); d < to->depth(); ++d) {
    const FieldTower* c = to->prefix(d);
    if (is_zero(c, v)) return Value{};
    v = wrap(Poly{v}, Poly{c->one()});
  }
  return v;
}

namespace {

bool needs_parens(const std::string& s) {
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i] == '+' || s[i] == '-' || s[i] == '/' || s[i] == '*') return true;
  }
  return false;
}

std::string poly_to_string(const FieldTower* c, const Poly& p, const std::string& sym) {
  if (p.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (is_zero(c, p[i])) continue;
    std::string term;
    const std::string coef = to_string(c, p[i]);
    if (i == 0) {
      term = coef;
    } else {
      std::string mono = sym;
      if (i > 1) mono += "^" + std::to_string(i);
      if (coef == "1") term = mono;
      else term = (needs_parens(coef) ? "(" + coef + ")" : coef) + "*" + mono;
    }
    if (!out.empty()) out += "+";
    out += term;
  }
  return out;
}

}  // namespace

std::string to_string(const FieldTower* t, const Value& a) {
  if (t->depth() == 0) return t->base().to_string(a.s);
  if (!a.r) return "0";
  const FieldTower* c = t->inner();
  const std::string& sym = t->outer().symbol;
  std::string num = poly_to_string(c, a.r->num, sym);
  if (is_one_poly(c, a.r->den)) return num;
  std::string den = poly_to_string(c, a.r->den, sym);
  if (needs_parens(num)) num = "(" + num + ")";
  if (needs_parens(den) || den.find('^') != std::string::npos) den = "(" + den + ")";
  return num + "/" + den;
}

}  // namespace detail

namespace {

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::string, std::unique_ptr<FieldTower>>& registry() {
  static std::map<std::string, std::unique_ptr<FieldTower>> r;
  return r;
}

std::string describe(std::uint32_t p, std::uint32_t k, const std::vector<LevelDescriptor>& levels) {
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < k; ++i) q *= p;
  std::string s = "GF(" + std::to_string(q) + ")";
  for (const auto& l : levels) {
    s += l.kind == LevelKind::LaurentSeries ? "((" + l.symbol + "))" : "(" + l.symbol + ")";
  }
  return s;
}

}  // namespace

const FieldTower* FieldTower::make(std::uint32_t p, std::uint32_t k, const std::vector<LevelDescriptor>& levels) {
  FiniteFieldPtr base = FiniteField::get(p, k);
  std::set<std::string> seen;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const auto& l = levels[i];
    if (l.symbol.empty()) fail(ErrorCode::InvalidArgument, "empty level symbol");
    if (l.symbol == "gen") fail(ErrorCode::InvalidArgument, "'gen' is reserved for the finite field generator");
    if (!seen.insert(l.symbol).second) fail(ErrorCode::InvalidArgument, "repeated level symbol " + l.symbol);
    if (l.kind == LevelKind::RationalFunction && i + 1 != levels.size()) {
      fail(ErrorCode::InvalidArgument, "a rational function level must be the outermost level");
    }
  }
  const std::string key = describe(p, k, levels);
  {
    std::lock_guard lock(registry_mutex());
    auto it = registry().find(key);
    if (it != registry().end()) return it->second.get();
  }
  std::vector<const FieldTower*> prefixes;
  if (!levels.empty()) {
    const FieldTower* inner = make(p, k, std::vector<LevelDescriptor>(levels.begin(), levels.end() - 1));
    prefixes = inner->prefixes_;
  }
  std::lock_guard lock(registry_mutex());
  auto& slot = registry()[key];
  if (slot) return slot.get();
  auto t = std::unique_ptr<FieldTower>(new FieldTower());
  t->base_ = base;
  t->levels_ = levels;
  t->prefixes_ = std::move(prefixes);
  t->prefixes_.push_back(t.get());
  if (levels.empty()) {
    t->one_ = detail::Value{1, nullptr};
  } else {
    auto r = std::make_shared<detail::RatFn>();
    r->num = {t->inner()->one()};
    r->den = {t->inner()->one()};
    t->one_ = detail::Value{0, std::move(r)};
  }
  slot = std::move(t);
  return slot.get();
}

const FieldTower* FieldTower::finite(std::uint64_t q) {
  auto pk = FiniteField::split_prime_power(q);
  if (!pk) fail(ErrorCode::InvalidArgument, std::to_string(q) + " is not a prime power");
  return make(pk->first, pk->second, {});
}

std::size_t FieldTower::laurent_count() const {
  std::size_t n = 0;
  for (const auto& l : levels_) n += l.kind == LevelKind::LaurentSeries;
  return n;
}

std::size_t FieldTower::outer_laurent_run() const {
  std::size_t n = 0;
  for (std::size_t i = levels_.size(); i-- > 0;) {
    if (levels_[i].kind != LevelKind::LaurentSeries) break;
    ++n;
  }
  return n;
}

bool FieldTower::has_prefix(const FieldTower* other) const {
  return other->depth() <= depth() && prefixes_[other->depth()] == other;
}

std::optional<std::size_t> FieldTower::level_of(const std::string& symbol) const {
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (levels_[i].symbol == symbol) return i;
  }
  return std::nullopt;
}

std::string FieldTower::to_string() const { return describe(base_->characteristic(), base_->degree(), levels_); }

void require_same_tower(const FieldTower* a, const FieldTower* b) {
  if (a != b) {
    fail(ErrorCode::TowerMismatch,
         (a ? a->to_string() : std::string("<none>")) + " vs " + (b ? b->to_string() : std::string("<none>")));
  }
}

Element Element::scalar(const FieldTower* t, FiniteField::Elem s) {
  const FieldTower* base = t->prefix(0);
  return Element(t, detail::embed(base, t, detail::Value{s, nullptr}));
}

Element Element::variable(const FieldTower* t, std::size_t level) {
  if (level >= t->depth()) fail(ErrorCode::InvalidArgument, "no such level");
  const FieldTower* home = t->prefix(level + 1);
  const FieldTower* c = home->inner();
  detail::Value x = detail::make_fraction(home, detail::Poly{detail::Value{}, c->one()}, detail::Poly{c->one()});
  return Element(t, detail::embed(home, t, std::move(x)));
}

Element Element::fraction(const FieldTower* t, const std::vector<Element>& num, const std::vector<Element>& den) {
  if (t->depth() == 0) fail(ErrorCode::UnsupportedLevel, "finite field has no level symbol");
  const FieldTower* c = t->inner();
  detail::Poly n, d;
  for (const auto& e : num) {
    require_same_tower(e.tower(), c);
    n.push_back(e.raw());
  }
  for (const auto& e : den) {
    require_same_tower(e.tower(), c);
    d.push_back(e.raw());
  }
  return Element(t, detail::make_fraction(t, std::move(n), std::move(d)));
}

bool Element::is_one() const { return detail::equal(tower_, value_, tower_->one()); }

Element Element::operator+(const Element& o) const {
  require_same_tower(tower_, o.tower_);
  return Element(tower_, detail::add(tower_, value_, o.value_));
}

Element Element::operator-(const Element& o) const {
  require_same_tower(tower_, o.tower_);
  return Element(tower_, detail::sub(tower_, value_, o.value_));
}

Element Element::operator*(const Element& o) const {
  require_same_tower(tower_, o.tower_);
  return Element(tower_, detail::mul(tower_, value_, o.value_));
}

Element Element::operator/(const Element& o) const {
  require_same_tower(tower_, o.tower_);
  return Element(tower_, detail::div(tower_, value_, o.value_));
}

Element Element::operator-() const { return Element(tower_, detail::neg(tower_, value_)); }

Element Element::inverse() const { return Element(tower_, detail::inv(tower_, value_)); }

Element Element::pow(long long e) const {
  Element base = e < 0 ? inverse() : *this;
  unsigned long long n = e < 0 ? static_cast<unsigned long long>(-e) : static_cast<unsigned long long>(e);
  Element result = one(tower_);
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n) base *= base;
  }
  return result;
}

bool Element::operator==(const Element& o) const {
  return tower_ == o.tower_ && detail::equal(tower_, value_, o.value_);
}

bool Element::operator<(const Element& o) const {
  require_same_tower(tower_, o.tower_);
  return detail::compare(tower_, value_, o.value_) < 0;
}

FiniteField::Elem Element::scalar_value() const {
  if (tower_->depth() != 0) fail(ErrorCode::UnsupportedLevel, "not a finite field element");
  return value_.s;
}

std::vector<Element> Element::numerator() const {
  if (tower_->depth() == 0) fail(ErrorCode::UnsupportedLevel, "finite field has no level symbol");
  std::vector<Element> out;
  if (!value_.r) return out;
  for (const auto& c : value_.r->num) out.emplace_back(tower_->inner(), c);
  return out;
}

std::vector<Element> Element::denominator() const {
  if (tower_->depth() == 0) fail(ErrorCode::UnsupportedLevel, "finite field has no level symbol");
  std::vector<Element> out;
  if (!value_.r) return {Element::one(tower_->inner())};
  for (const auto& c : value_.r->den) out.emplace_back(tower_->inner(), c);
  return out;
}

bool Element::is_polynomial() const {
  if (tower_->depth() == 0) return true;
  return !value_.r || value_.r->den.size() == 1;
}

bool Element::is_constant() const {
  if (tower_->depth() == 0) return true;
  return !value_.r || (value_.r->den.size() == 1 && value_.r->num.size() == 1);
}

Element Element::constant_value() const {
  if (!is_constant() || tower_->depth() == 0) fail(ErrorCode::UnsupportedLevel, "element involves " + tower_->outer().symbol);
  if (!value_.r) return zero(tower_->inner());
  return Element(tower_->inner(), value_.r->num[0]);
}

Element Element::lift(const FieldTower* to) const {
  if (to == tower_) return *this;
  return Element(to, detail::embed(tower_, to, value_));
}

std::string Element::to_string() const { return detail::to_string(tower_, value_); }

}  // namespace qfl
