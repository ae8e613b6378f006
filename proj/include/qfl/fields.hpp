#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "qfl/fq_poly.hpp"
#include "qfl/tower.hpp"

namespace qfl {

// Valuation vectors, outermost Laurent level first.  std::vector's
// lexicographic operator< is exactly the order of the composed valuation.
using ValueVector = std::vector<long long>;

using Rng = std::mt19937_64;

// Order of vanishing of a != 0 at the outermost symbol.
long long outer_order(const Element& a);
// Leading (lowest-order) coefficient of a at the outermost symbol: the
// residue of a * s^(-outer_order(a)).  Lives in the inner tower.
Element angular_component(const Element& a);

// Valuation with respect to every LaurentSeries level, outermost first.
// A RationalFunction outer level is skipped when `a` does not involve it.
ValueVector valuation(const Element& a);
// Image of a unit (or zero) in the tower with the outer Laurent level removed.
Element residue(const Element& a);

// Square test under the tower's semantics (henselian on Laurent levels,
// global on a rational function level).
bool is_square(const Element& a);
// Square root inside the represented subfield (every level read as a
// rational function field), if there is one.
std::optional<Element> exact_sqrt(const Element& a);

// A fixed representative of the square class of a != 0.  For Laurent
// outer levels the representative is t^e * (representative of the angular
// component); it agrees with `a` up to a square of the completion.
Element canonical_square_class(const Element& a);

struct SampleBudget {
  int max_valuation = 2;  // |v| bound on Laurent levels
  int max_degree = 2;     // degree bound for unit parts and polynomials
};

Element sample(const FieldTower* tower, const SampleBudget& budget, Rng& rng);
Element sample(const FieldTower* tower, const SampleBudget& budget, std::uint64_t seed);
// A sample that is a polynomial in the outer symbol (degree <= max_degree)
// with nonzero constant term when the outer level is Laurent.
Element sample_polynomial(const FieldTower* tower, int max_degree, Rng& rng);

// Per-index seeds derived from a master seed (splitmix64).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// Conversions for towers GF(q)(X) and GF(q)((t)) of depth 1.
FqPoly to_fq_poly(const std::vector<Element>& coeffs);
Element from_fq_poly(const FieldTower* tower, const FqPoly& num, const FqPoly& den = FqPoly{1});

}  // namespace qfl
