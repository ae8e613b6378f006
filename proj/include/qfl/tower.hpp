#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qfl/finite_field.hpp"

namespace qfl {

class FieldTower;

namespace detail {

struct RatFn;

// A field element one tower level at a time.  At depth 0 only `s` is used
// (a FiniteField code).  At depth d >= 1 `r` holds a reduced fraction of
// polynomials in the level-d symbol with depth d-1 coefficients; a null `r`
// is zero.  The depth is never stored: it is implied by the tower.
struct Value {
  std::uint32_t s = 0;
  std::shared_ptr<const RatFn> r;
};

// Coefficients, constant term first, no trailing zeros.
using Poly = std::vector<Value>;

// num/den with den monic and gcd(num, den) = 1.
struct RatFn {
  Poly num;
  Poly den;
};

bool is_zero(const FieldTower* t, const Value& a);
bool equal(const FieldTower* t, const Value& a, const Value& b);
int compare(const FieldTower* t, const Value& a, const Value& b);

Value zero_value();
Value one_value(const FieldTower* t);
Value from_int(const FieldTower* t, long long n);
Value add(const FieldTower* t, const Value& a, const Value& b);
Value sub(const FieldTower* t, const Value& a, const Value& b);
Value neg(const FieldTower* t, const Value& a);
Value mul(const FieldTower* t, const Value& a, const Value& b);
Value inv(const FieldTower* t, const Value& a);
Value div(const FieldTower* t, const Value& a, const Value& b);

// Polynomial helpers over the field `c` (the coefficient tower).
void trim(const FieldTower* c, Poly& p);
Poly poly_add(const FieldTower* c, const Poly& a, const Poly& b);
Poly poly_sub(const FieldTower* c, const Poly& a, const Poly& b);
Poly poly_mul(const FieldTower* c, const Poly& a, const Poly& b);
Poly poly_scale(const FieldTower* c, const Poly& a, const Value& s);
void poly_divmod(const FieldTower* c, const Poly& a, const Poly& b, Poly* quot, Poly* rem);
Poly poly_gcd(const FieldTower* c, const Poly& a, const Poly& b);
bool poly_equal(const FieldTower* c, const Poly& a, const Poly& b);

// Builds the reduced fraction num/den at level t.  Throws DivisionByZero
// on a zero denominator.
Value make_fraction(const FieldTower* t, Poly num, Poly den);
const RatFn& fraction(const Value& a);

// Wraps a value of tower `from` as a constant of its extension `to`.
Value embed(const FieldTower* from, const FieldTower* to, Value v);

std::string to_string(const FieldTower* t, const Value& a);

}  // namespace detail

enum class LevelKind { LaurentSeries, RationalFunction };

struct LevelDescriptor {
  std::string symbol;
  LevelKind kind;
};

// GF(p^k) followed by transcendental levels, innermost first.  Towers are
// interned: two towers with the same description are the same object, so
// pointer comparison decides equality.  Towers live for the whole program.
class FieldTower {
 public:
  // Throws InvalidArgument if p = 2, p is not prime, a symbol repeats, or a
  // RationalFunction level is not the outermost.
  static const FieldTower* make(std::uint32_t p, std::uint32_t k, const std::vector<LevelDescriptor>& levels);
  static const FieldTower* finite(std::uint64_t q);

  const FiniteField& base() const { return *base_; }
  const FiniteFieldPtr& base_ptr() const { return base_; }
  std::size_t depth() const { return levels_.size(); }
  const std::vector<LevelDescriptor>& levels() const { return levels_; }
  const LevelDescriptor& level(std::size_t i) const { return levels_.at(i); }
  const LevelDescriptor& outer() const { return levels_.back(); }

  bool is_finite() const { return levels_.empty(); }
  bool outer_is_laurent() const { return !levels_.empty() && levels_.back().kind == LevelKind::LaurentSeries; }
  bool outer_is_rational() const { return !levels_.empty() && levels_.back().kind == LevelKind::RationalFunction; }
  // Number of LaurentSeries levels in the tower.
  std::size_t laurent_count() const;
  // Number of LaurentSeries levels counted from the outermost inwards,
  // stopping at the first RationalFunction level.
  std::size_t outer_laurent_run() const;

  // The tower made of the first n levels.
  const FieldTower* prefix(std::size_t n) const { return prefixes_.at(n); }
  // Drops the outermost level; nullptr for a finite field.
  const FieldTower* inner() const { return levels_.empty() ? nullptr : prefixes_[levels_.size() - 1]; }
  bool has_prefix(const FieldTower* other) const;

  std::optional<std::size_t> level_of(const std::string& symbol) const;
  const detail::Value& one() const { return one_; }

  // "GF(9)((t))((u))"
  std::string to_string() const;

 private:
  FieldTower() = default;

  FiniteFieldPtr base_;
  std::vector<LevelDescriptor> levels_;
  std::vector<const FieldTower*> prefixes_;  // prefixes_[depth()] == this
  detail::Value one_;
};

class Element {
 public:
  Element() = default;
  Element(const FieldTower* tower, detail::Value value) : tower_(tower), value_(std::move(value)) {}

  static Element zero(const FieldTower* t) { return Element(t, detail::zero_value()); }
  static Element one(const FieldTower* t) { return Element(t, t->one()); }
  static Element from_int(const FieldTower* t, long long n) { return Element(t, detail::from_int(t, n)); }
  static Element scalar(const FieldTower* t, FiniteField::Elem s);
  // The symbol of level i, as an element of t.
  static Element variable(const FieldTower* t, std::size_t level);
  // num/den in the outermost symbol; coefficients live in t->inner().
  static Element fraction(const FieldTower* t, const std::vector<Element>& num, const std::vector<Element>& den);

  const FieldTower* tower() const { return tower_; }
  const detail::Value& raw() const { return value_; }

  bool is_zero() const { return detail::is_zero(tower_, value_); }
  bool is_one() const;

  Element operator+(const Element& o) const;
  Element operator-(const Element& o) const;
  Element operator*(const Element& o) const;
  Element operator/(const Element& o) const;
  Element operator-() const;
  Element& operator+=(const Element& o) { return *this = *this + o; }
  Element& operator-=(const Element& o) { return *this = *this - o; }
  Element& operator*=(const Element& o) { return *this = *this * o; }
  Element& operator/=(const Element& o) { return *this = *this / o; }
  Element inverse() const;
  Element pow(long long e) const;

  bool operator==(const Element& o) const;
  bool operator!=(const Element& o) const { return !(*this == o); }
  // Structural total order, for sorting and canonical output only.
  bool operator<(const Element& o) const;

  // Depth-0 code.
  FiniteField::Elem scalar_value() const;
  // Numerator / denominator coefficients at the outermost level (depth >= 1).
  std::vector<Element> numerator() const;
  std::vector<Element> denominator() const;
  bool is_polynomial() const;
  // True when the element does not involve the outermost symbol.
  bool is_constant() const;
  // The element as a member of t->inner(); requires is_constant().
  Element constant_value() const;
  // Embeds into an extension tower that has this tower as a prefix.
  Element lift(const FieldTower* to) const;

  std::string to_string() const;

 private:
  const FieldTower* tower_ = nullptr;
  detail::Value value_;
};

void require_same_tower(const FieldTower* a, const FieldTower* b);

}  // namespace qfl
