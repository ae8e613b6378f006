#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qfl/qforms.hpp"
#include "qfl/valuation.hpp"

namespace qfl {

// <<a1, ..., a_{d-1}, b]]: the bilinear Pfister form <<a1, ..., a_{d-1}>>
// tensored with the binary form x^2 - xy - b y^2.  Requires all a_i != 0
// and 1 + 4b != 0.
struct QuadraticPfisterSymbol {
  const FieldTower* tower = nullptr;
  std::vector<Element> slots;
  Element last;

  QuadraticPfisterSymbol() = default;
  QuadraticPfisterSymbol(const FieldTower* tower, std::vector<Element> slots, Element last);

  std::size_t fold() const { return slots.size() + 1; }
  bool operator==(const QuadraticPfisterSymbol& o) const {
    return tower == o.tower && slots == o.slots && last == o.last;
  }
};

// <<a1, ..., ad>> = <1, -a1> ⊗ ... ⊗ <1, -ad>, all a_i != 0.
struct BilinearPfisterSymbol {
  const FieldTower* tower = nullptr;
  std::vector<Element> slots;

  BilinearPfisterSymbol() = default;
  BilinearPfisterSymbol(const FieldTower* tower, std::vector<Element> slots);

  std::size_t fold() const { return slots.size(); }
  bool operator==(const BilinearPfisterSymbol& o) const { return tower == o.tower && slots == o.slots; }
};

// Slot positions are 1-based.  Swap(i) exchanges slots i and i+1;
// Merge(i) rewrites <<a_i, a_{i+1}>> as <<a_i + a_{i+1}, -a_i a_{i+1}>>;
// SquareScale(i, c) multiplies slot i by c^2.
struct RewriteRule {
  enum class Kind { Swap, Merge, SquareScale };
  Kind kind = Kind::Swap;
  std::size_t index = 1;
  Element scalar;

  static RewriteRule swap(std::size_t i) { return {Kind::Swap, i, {}}; }
  static RewriteRule merge(std::size_t i) { return {Kind::Merge, i, {}}; }
  static RewriteRule square_scale(std::size_t i, const Element& c) { return {Kind::SquareScale, i, c}; }

  std::string to_string() const;
};

struct RewriteStep {
  RewriteRule rule;
  BilinearPfisterSymbol before;
  BilinearPfisterSymbol after;
  // A Merge on a_i + a_{i+1} = 0: the symbol is metabolic and `after`
  // carries last slot 1 instead of the merged pair.
  bool degenerate = false;
};

struct RewriteTrace {
  std::vector<RewriteStep> steps;
};

std::vector<Element> pfister_entries(const FieldTower* tower, const std::vector<Element>& slots);
QuadraticForm expand(const BilinearPfisterSymbol& s);
// <<a]] ⊗ <1, -(1+4b)>, the <1, -(1+4b)> index varying fastest.
QuadraticForm expand(const QuadraticPfisterSymbol& s);

// One rule application; RuleNotApplicable for a bad index, a zero scalar or
// a Merge with a_i + a_{i+1} = 0.
std::pair<BilinearPfisterSymbol, RewriteTrace> rewrite(const BilinearPfisterSymbol& s, const RewriteRule& rule);
// Re-applies the trace to s, checking every snapshot.
BilinearPfisterSymbol replay(const BilinearPfisterSymbol& s, const RewriteTrace& trace);

// Rewrites s so that its last slot is a unit for v.  The class of the last
// slot must lie in the F2-span of the other slots' classes.
std::pair<BilinearPfisterSymbol, RewriteTrace> normalize_last_slot(const BilinearPfisterSymbol& s,
                                                                   const ValuationCtx& v);

// An isometric symbol with v(b) = v(1+4b) = 0.  NoGoodSlot when none
// exists in the symbol's shape (see README).
QuadraticPfisterSymbol good_slot_presentation(const QuadraticPfisterSymbol& s, const ValuationCtx& v);
// Trivial valuation: every symbol already qualifies.
inline QuadraticPfisterSymbol good_slot_presentation(const QuadraticPfisterSymbol& s) { return s; }

struct ResidueCoset {
  std::size_t mask = 0;              // class of sum v(a_i), i in subset
  std::vector<std::size_t> subset;   // 0-based indices of independent slots
  Element representative;            // prod a_i over the subset
  Element multiplier;                // residue part at mask = multiplier * expand(first_residue)
};

struct PfisterResidueReport {
  bool isotropic = false;
  // Isometric presentation: m slots of independent classes, then units.
  QuadraticPfisterSymbol presentation;
  std::size_t m = 0;
  QuadraticPfisterSymbol first_residue;  // over the residue tower
  std::vector<ResidueCoset> cosets;      // the classes in the span
  std::vector<std::size_t> zero_masks;   // classes with zero residue
};

PfisterResidueReport pfister_residues(const QuadraticPfisterSymbol& s, const ValuationCtx& v);

}  // namespace qfl
