#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qfl/fq_poly.hpp"
#include "qfl/qforms.hpp"
#include "qfl/valuation.hpp"

namespace qfl {

// A place of GF(q)(X): a monic irreducible polynomial, or the degree
// valuation at infinity (uniformizer 1/X).
struct Place {
  enum class Kind { Finite, Infinity };
  Kind kind = Kind::Infinity;
  FqPoly poly;  // monic irreducible, Finite only
  int degree = 1;

  static Place finite(const FiniteField& f, const FqPoly& p);
  static Place infinity() { return Place{}; }

  bool operator==(const Place& o) const { return kind == o.kind && poly == o.poly; }
  bool operator<(const Place& o) const;
  std::string to_string(const FieldTower* tower) const;
};

// One diagonal entry at a place: entry = unit * pi^valuation.
struct LocalEntry {
  long long valuation = 0;
  // Residue of the unit part, as a polynomial reduced modulo the place
  // polynomial (a constant at infinity).
  FqPoly residue;
};

struct Completion {
  Place place;
  FiniteFieldPtr field;
  // GF(q^deg) as a tower, when the residue field is small enough to be
  // materialized (order <= 2^16); nullptr otherwise.
  const FieldTower* residue_tower = nullptr;
  std::vector<LocalEntry> entries;
  // Residues as elements of residue_tower, when available.
  std::vector<Element> residues;
};

long long place_valuation(const Element& a, const Place& place);
// Residue of a * pi^(-v(a)) modulo the place.
FqPoly place_unit_residue(const Element& a, const Place& place);

std::vector<Place> places_of_interest(const QuadraticForm& q);
Completion localize(const QuadraticForm& q, const Place& place);
bool is_locally_isotropic(const Completion& c);

struct LocalVerdict {
  Place place;
  bool isotropic = false;
};

struct GlobalIsotropyReport {
  bool isotropic = false;
  std::string rule;  // "dim>=5", "dim=1", "dim=2", "local"
  std::vector<LocalVerdict> local;
};

GlobalIsotropyReport global_isotropy_report(const QuadraticForm& q);
bool is_isotropic_global(const QuadraticForm& q);

// An exact isotropic vector of a form over GF(q)(X), or nullopt when the
// form is anisotropic.  Throws BudgetExceeded when the auxiliary search
// exceeds `degree_cap`.
std::optional<Vector> global_isotropic_vector(const QuadraticForm& q, int degree_cap = 12);

// Tame Hilbert symbol (+1 or -1) at a rank-1 valuation with finite
// residue field, or at a place of GF(q)(X).
int hilbert_symbol(const Element& a, const Element& b, const ValuationCtx& v);
int hilbert_symbol(const Element& a, const Element& b, const Place& place);

// Element of GF(q^deg) for a residue polynomial at a finite place, via an
// embedding GF(q)[X]/(P) -> GF(q^deg); nullopt if the field is too large.
std::optional<Element> residue_element(const FieldTower* global, const Place& place, const FqPoly& residue);

}  // namespace qfl
