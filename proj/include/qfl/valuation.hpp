#pragma once

#include <cstddef>
#include <vector>

#include "qfl/fields.hpp"
#include "qfl/qforms.hpp"

namespace qfl {

// The composed valuation of the `rank` outermost LaurentSeries levels of
// a tower (rank 1 is the valuation of the outermost level alone).  Value
// vectors list the outermost level first.
class ValuationCtx {
 public:
  ValuationCtx(const FieldTower* tower, std::size_t rank);
  static ValuationCtx outer(const FieldTower* tower) { return ValuationCtx(tower, 1); }
  // All LaurentSeries levels counted from the outside.
  static ValuationCtx full(const FieldTower* tower);

  const FieldTower* tower() const { return tower_; }
  std::size_t rank() const { return rank_; }
  const FieldTower* residue_tower() const { return tower_->prefix(tower_->depth() - rank_); }
  // The symbol index (tower level) of component i, i = 0 being outermost.
  std::size_t level_of_component(std::size_t i) const { return tower_->depth() - 1 - i; }

  ValueVector value(const Element& a) const;
  // Residue of a * prod t_i^(-v_i(a)), in the residue tower.
  Element angular_component(const Element& a) const;
  // Residue of a unit (value vector zero); NotIntegralUnit otherwise.
  Element residue(const Element& a) const;
  Element monomial(const ValueVector& exponents) const;

  // Classes of vK/2vK, as bit masks with bit i = parity of component i.
  std::size_t class_count() const { return std::size_t{1} << rank_; }
  std::size_t class_of(const ValueVector& v) const;
  std::size_t class_of(const Element& a) const { return class_of(value(a)); }
  // The monomial prod t_i^(bit i) representing a class.
  Element coset_rep(std::size_t mask) const;

  bool operator==(const ValuationCtx& o) const { return tower_ == o.tower_ && rank_ == o.rank_; }

 private:
  const FieldTower* tower_;
  std::size_t rank_;
};

// v_inner must live on the residue tower of v_outer.
ValuationCtx compose(const ValuationCtx& v_outer, const ValuationCtx& v_inner);

struct ResidueDecomposition {
  // One entry per class of vK/2vK met by the form, ordered by mask.
  std::vector<std::size_t> masks;
  std::vector<Element> coset_reps;
  std::vector<QuadraticForm> parts;  // over the residue tower

  const QuadraticForm* part_for_mask(std::size_t mask) const;
};

// Residue parts of the given diagonalization, without reducing them.
ResidueDecomposition residue_parts(const QuadraticForm& q, const ValuationCtx& v);
// Residue forms of the anisotropic part of q: the raw parts, each reduced
// to its anisotropic kernel over the residue tower.
ResidueDecomposition springer_decompose(const QuadraticForm& q, const ValuationCtx& v);
// The residue form at pi (an empty form when the class is not met).
QuadraticForm residue_form(const QuadraticForm& q, const ValuationCtx& v, const Element& pi);

struct HenselOptions {
  int precision = 16;
};

struct HenselLift {
  Vector z;
  // True when q(z) = 0 holds exactly; otherwise q(z) vanishes to order
  // >= precision at the outer symbol.
  bool exact = true;
  int precision = 0;
};

// Lifts an isotropic vector of the residue form of a unit-diagonal q
// (rank-1 context) to a zero of q.
HenselLift hensel_lift_isotropic(const QuadraticForm& q, const ValuationCtx& v, const Vector& residue_witness,
                                 const HenselOptions& options = {});

struct SpanResult {
  bool in_span = false;
  // Indices of a maximal F2-independent subset of the input vectors.
  std::vector<std::size_t> basis;
  // Indices (into the input) whose classes sum to the target, when in span.
  std::vector<std::size_t> combination;
};

SpanResult f2_span(const std::vector<ValueVector>& vectors, const ValueVector& target);

}  // namespace qfl
