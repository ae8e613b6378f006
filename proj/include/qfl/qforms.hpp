#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qfl/tower.hpp"

namespace qfl {

using Vector = std::vector<Element>;
using Matrix = std::vector<std::vector<Element>>;

// The diagonal form <d1, ..., dn> = sum d_i x_i^2 with every d_i != 0.
// The empty form (dimension 0) is allowed; it is the zero of the Witt group.
class QuadraticForm {
 public:
  QuadraticForm() = default;
  explicit QuadraticForm(const FieldTower* tower, std::vector<Element> diag = {});

  const FieldTower* tower() const { return tower_; }
  std::size_t dim() const { return diag_.size(); }
  bool empty() const { return diag_.empty(); }
  const std::vector<Element>& diag() const { return diag_; }
  const Element& operator[](std::size_t i) const { return diag_[i]; }

  Element evaluate(const Vector& x) const;
  // b(x, y) = sum d_i x_i y_i, so that q(x) = b(x, x).
  Element bilinear(const Vector& x, const Vector& y) const;
  Element determinant() const;

  bool operator==(const QuadraticForm& o) const { return tower_ == o.tower_ && diag_ == o.diag_; }

 private:
  const FieldTower* tower_ = nullptr;
  std::vector<Element> diag_;
};

// Symmetric Gram matrix; only an input format.
class GramForm {
 public:
  GramForm(const FieldTower* tower, Matrix gram);
  const FieldTower* tower() const { return tower_; }
  const Matrix& gram() const { return gram_; }
  std::size_t dim() const { return gram_.size(); }

 private:
  const FieldTower* tower_;
  Matrix gram_;
};

struct Diagonalization {
  QuadraticForm form;
  // Columns are the new basis vectors: T^t * gram * T = diag(form).
  Matrix change_of_basis;
};

struct WittDecomposition {
  QuadraticForm anisotropic_kernel;
  std::size_t witt_index = 0;
  // False when the decomposition stopped early at a requested index; the
  // kernel may then still be isotropic.
  bool complete = true;
};

struct WittOptions {
  // Degree cap for the isotropic-vector search over GF(q)(X).
  int degree_cap = 12;
  // Stop once this many hyperbolic planes have been split off.
  std::optional<std::size_t> target_index;
};

Diagonalization diagonalize(const GramForm& g);

QuadraticForm orthogonal_sum(const QuadraticForm& a, const QuadraticForm& b);
QuadraticForm scaled(const QuadraticForm& q, const Element& c);
// Diagonal bilinear form B tensored with q: all products b_i * d_j, with
// the q index varying fastest.
QuadraticForm tensor(const std::vector<Element>& bilinear_diag, const QuadraticForm& q);
QuadraticForm negated(const QuadraticForm& q);

enum class CombineOp { OrthogonalSum, Scale, TensorBilinear };
// orth_sum: q1 ⊥ q2; scale: q1 scaled by `c`; tensor_bilinear: diag(q2) ⊗ q1.
QuadraticForm combine(const QuadraticForm& q1, const QuadraticForm& q2, CombineOp op, const Element* c = nullptr);

bool is_isotropic(const QuadraticForm& q);
WittDecomposition witt_decompose(const QuadraticForm& q, const WittOptions& options = {});
bool isometric(const QuadraticForm& a, const QuadraticForm& b, const WittOptions& options = {});

// Entrywise canonical square classes.  Isometric to q over the tower's
// semantics (over the completion on Laurent levels).
QuadraticForm canonicalize(const QuadraticForm& q);

// An exact isotropic vector of a canonicalized form (see canonicalize), or
// nullopt when the form is anisotropic.  Throws BudgetExceeded when the
// search over GF(q)(X) hits the degree cap.
std::optional<Vector> find_isotropic_vector(const QuadraticForm& canonical, int degree_cap = 12);

// Given q and z != 0 with q(z) = 0, a diagonalization of the orthogonal
// complement of the hyperbolic plane spanned by z and a coordinate vector.
QuadraticForm split_hyperbolic_plane(const QuadraticForm& q, const Vector& z);

// Gram matrix of q restricted to the span of the given vectors.
Matrix restricted_gram(const QuadraticForm& q, const std::vector<Vector>& basis);

}  // namespace qfl
