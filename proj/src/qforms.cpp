#include "qfl/qforms.hpp"

#include <algorithm>

#include "qfl/errors.hpp"
#include "qfl/fields.hpp"
#include "qfl/localglobal.hpp"

namespace qfl {

QuadraticForm::QuadraticForm(const FieldTower* tower, std::vector<Element> diag)
    : tower_(tower), diag_(std::move(diag)) {
  if (!tower_) fail(ErrorCode::InvalidArgument, "form without a tower");
  for (const auto& d : diag_) {
    require_same_tower(d.tower(), tower_);
    if (d.is_zero()) fail(ErrorCode::SingularForm, "zero diagonal entry");
  }
}

Element QuadraticForm::evaluate(const Vector& x) const { return bilinear(x, x); }

Element QuadraticForm::bilinear(const Vector& x, const Vector& y) const {
  if (x.size() != dim() || y.size() != dim()) fail(ErrorCode::InvalidArgument, "vector length does not match form");
  Element acc = Element::zero(tower_);
  for (std::size_t i = 0; i < dim(); ++i) {
    if (x[i].is_zero() || y[i].is_zero()) continue;
    acc += diag_[i] * x[i] * y[i];
  }
  return acc;
}

Element QuadraticForm::determinant() const {
  Element acc = Element::one(tower_);
  for (const auto& d : diag_) acc *= d;
  return acc;
}

GramForm::GramForm(const FieldTower* tower, Matrix gram) : tower_(tower), gram_(std::move(gram)) {
  for (std::size_t i = 0; i < gram_.size(); ++i) {
    if (gram_[i].size() != gram_.size()) fail(ErrorCode::InvalidArgument, "Gram matrix is not square");
    for (std::size_t j = 0; j < gram_.size(); ++j) {
      require_same_tower(gram_[i][j].tower(), tower_);
      if (gram_[i][j] != gram_[j][i]) fail(ErrorCode::InvalidArgument, "Gram matrix is not symmetric");
    }
  }
}

Diagonalization diagonalize(const GramForm& g) {
  const FieldTower* t = g.tower();
  const std::size_t n = g.dim();
  Matrix a = g.gram();
  Matrix basis(n, std::vector<Element>(n, Element::zero(t)));
  for (std::size_t i = 0; i < n; ++i) basis[i][i] = Element::one(t);
  // Row/column operations on a; basis[k] is the k-th new basis vector.
  auto add_multiple = [&](std::size_t dst, std::size_t src, const Element& f) {
    for (std::size_t k = 0; k < n; ++k) a[dst][k] += f * a[src][k];
    for (std::size_t k = 0; k < n; ++k) a[k][dst] += f * a[k][src];
    for (std::size_t k = 0; k < n; ++k) basis[dst][k] += f * basis[src][k];
  };
  auto swap_index = [&](std::size_t i, std::size_t j) {
    std::swap(a[i], a[j]);
    for (auto& row : a) std::swap(row[i], row[j]);
    std::swap(basis[i], basis[j]);
  };
  for (std::size_t p = 0; p < n; ++p) {
    if (a[p][p].is_zero()) {
      std::size_t q = p + 1;
      while (q < n && a[q][q].is_zero()) ++q;
      if (q < n) {
        swap_index(p, q);
      } else {
        q = p + 1;
        while (q < n && a[p][q].is_zero()) ++q;
        if (q == n) fail(ErrorCode::SingularForm, "Gram matrix is singular");
        add_multiple(p, q, Element::one(t));
      }
    }
    for (std::size_t r = p + 1; r < n; ++r) {
      if (a[r][p].is_zero()) continue;
      add_multiple(r, p, -(a[r][p] / a[p][p]));
    }
  }
  std::vector<Element> diag;
  for (std::size_t i = 0; i < n; ++i) diag.push_back(a[i][i]);
  Matrix columns(n, std::vector<Element>(n, Element::zero(t)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) columns[i][j] = basis[j][i];
  }
  return Diagonalization{QuadraticForm(t, std::move(diag)), std::move(columns)};
}

QuadraticForm orthogonal_sum(const QuadraticForm& a, const QuadraticForm& b) {
  require_same_tower(a.tower(), b.tower());
  std::vector<Element> d = a.diag();
  d.insert(d.end(), b.diag().begin(), b.diag().end());
  return QuadraticForm(a.tower(), std::move(d));
}

QuadraticForm scaled(const QuadraticForm& q, const Element& c) {
  require_same_tower(q.tower(), c.tower());
  if (c.is_zero()) fail(ErrorCode::ZeroScalar, "scaling by zero");
  std::vector<Element> d;
  for (const auto& x : q.diag()) d.push_back(x * c);
  return QuadraticForm(q.tower(), std::move(d));
}

QuadraticForm tensor(const std::vector<Element>& bilinear_diag, const QuadraticForm& q) {
  std::vector<Element> d;
  for (const auto& b : bilinear_diag) {
    require_same_tower(b.tower(), q.tower());
    if (b.is_zero()) fail(ErrorCode::ZeroScalar, "zero entry in bilinear factor");
    for (const auto& x : q.diag()) d.push_back(b * x);
  }
  return QuadraticForm(q.tower(), std::move(d));
}

QuadraticForm negated(const QuadraticForm& q) { return scaled(q, -Element::one(q.tower())); }

QuadraticForm combine(const QuadraticForm& q1, const QuadraticForm& q2, CombineOp op, const Element* c) {
  switch (op) {
    case CombineOp::OrthogonalSum: return orthogonal_sum(q1, q2);
    case CombineOp::Scale:
      if (!c) fail(ErrorCode::InvalidArgument, "scale needs a scalar");
      return scaled(q1, *c);
    case CombineOp::TensorBilinear:
      require_same_tower(q1.tower(), q2.tower());
      return tensor(q2.diag(), q1);
  }
  fail(ErrorCode::Internal, "unknown combine op");
}

namespace {

bool finite_isotropic(const FiniteField& f, const std::vector<FiniteField::Elem>& d) {
  if (d.size() >= 3) return true;
  if (d.size() == 2) return f.is_square(f.neg(f.mul(d[0], d[1])));
  return false;
}

std::optional<Vector> finite_isotropic_vector(const QuadraticForm& q) {
  const FieldTower* t = q.tower();
  const FiniteField& f = t->base();
  const std::size_t n = q.dim();
  Vector z(n, Element::zero(t));
  auto el = [&](FiniteField::Elem x) { return Element(t, detail::Value{x, nullptr}); };
  if (n < 2) return std::nullopt;
  const auto a = q[0].scalar_value();
  const auto b = q[1].scalar_value();
  if (n == 2) {
    auto r = f.sqrt(f.neg(f.div(b, a)));
    if (!r) return std::nullopt;
    z[0] = el(*r);
    z[1] = Element::one(t);
    return z;
  }
  const auto c = q[2].scalar_value();
  for (FiniteField::Elem x = 0; x < f.order(); ++x) {
    const auto rhs = f.div(f.sub(f.neg(c), f.mul(a, f.mul(x, x))), b);
    if (auto y = f.sqrt(rhs)) {
      z[0] = el(x);
      z[1] = el(*y);
      z[2] = Element::one(t);
      return z;
    }
  }
  fail(ErrorCode::Internal, "no zero found for a ternary form over a finite field");
}

// Residue parts at the outer Laurent level from raw entries.
void outer_parts(const QuadraticForm& q, std::vector<Element> parts[2], std::vector<std::size_t> index[2]) {
  for (std::size_t i = 0; i < q.dim(); ++i) {
    const long long v = outer_order(q[i]);
    const int e = static_cast<int>(((v % 2) + 2) % 2);
    parts[e].push_back(angular_component(q[i]));
    index[e].push_back(i);
  }
}

void require_supported(const FieldTower* t) {
  if (t->outer_is_rational() && !t->inner()->is_finite()) {
    fail(ErrorCode::UnsupportedTower,
         "isotropy over " + t->to_string() + " (rational level over a Laurent level) is not supported");
  }
  if (t->depth() > 0 && t->outer_is_laurent()) require_supported(t->inner());
}

}  // namespace

bool is_isotropic(const QuadraticForm& q) {
  const FieldTower* t = q.tower();
  require_supported(t);
  if (t->is_finite()) {
    std::vector<FiniteField::Elem> d;
    for (const auto& x : q.diag()) d.push_back(x.scalar_value());
    return finite_isotropic(t->base(), d);
  }
  if (t->outer_is_laurent()) {
    std::vector<Element> parts[2];
    std::vector<std::size_t> index[2];
    outer_parts(q, parts, index);
    for (auto& p : parts) {
      if (p.size() >= 2 && is_isotropic(QuadraticForm(t->inner(), p))) return true;
    }
    return false;
  }
  return is_isotropic_global(q);
}

QuadraticForm canonicalize(const QuadraticForm& q) {
  std::vector<Element> d;
  d.reserve(q.dim());
  for (const auto& x : q.diag()) d.push_back(canonical_square_class(x));
  return QuadraticForm(q.tower(), std::move(d));
}

std::optional<Vector> find_isotropic_vector(const QuadraticForm& q, int degree_cap) {
  const FieldTower* t = q.tower();
  require_supported(t);
  if (q.dim() < 2) return std::nullopt;
  if (t->is_finite()) return finite_isotropic_vector(q);
  if (t->outer_is_laurent()) {
    std::vector<Element> parts[2];
    std::vector<std::size_t> index[2];
    outer_parts(q, parts, index);
    for (int e = 0; e < 2; ++e) {
      if (parts[e].size() < 2) continue;
      auto zbar = find_isotropic_vector(QuadraticForm(t->inner(), parts[e]), degree_cap);
      if (!zbar) continue;
      // Entries are t^e * (inner constant) in canonical shape up to even
      // powers of t, which the coordinates absorb.
      Vector z(q.dim(), Element::zero(t));
      const Element s = Element::variable(t, t->depth() - 1);
      for (std::size_t k = 0; k < index[e].size(); ++k) {
        const std::size_t i = index[e][k];
        const long long v = outer_order(q[i]);
        z[i] = (*zbar)[k].lift(t) * s.pow(-(v - e) / 2);
      }
      if (!q.evaluate(z).is_zero()) fail(ErrorCode::Internal, "form is not in canonical shape");
      return z;
    }
    return std::nullopt;
  }
  return global_isotropic_vector(q, degree_cap);
}

Matrix restricted_gram(const QuadraticForm& q, const std::vector<Vector>& basis) {
  Matrix g(basis.size(), std::vector<Element>(basis.size()));
  for (std::size_t a = 0; a < basis.size(); ++a) {
    for (std::size_t b = a; b < basis.size(); ++b) {
      g[a][b] = q.bilinear(basis[a], basis[b]);
      g[b][a] = g[a][b];
    }
  }
  return g;
}

QuadraticForm split_hyperbolic_plane(const QuadraticForm& q, const Vector& z) {
  const FieldTower* t = q.tower();
  const std::size_t n = q.dim();
  if (!q.evaluate(z).is_zero()) fail(ErrorCode::NotIsotropic, "vector is not isotropic");
  std::size_t i = n, j = n;
  for (std::size_t k = 0; k < n; ++k) {
    if (z[k].is_zero()) continue;
    if (i == n) i = k;
    else if (j == n) j = k;
  }
  if (i == n || j == n) fail(ErrorCode::NotIsotropic, "isotropic vector must have two nonzero coordinates");
  // H = span(z, e_i) is a hyperbolic plane since b(z, e_i) = d_i z_i != 0.
  const Element c = q[i] * z[i];
  std::vector<Vector> basis;
  for (std::size_t k = 0; k < n; ++k) {
    if (k == i || k == j) continue;
    const Element beta = q[k] * z[k] / c;
    const Element alpha = -(beta * q[i] / c);
    Vector w(n, Element::zero(t));
    for (std::size_t m = 0; m < n; ++m) w[m] = -(alpha * z[m]);
    w[k] += Element::one(t);
    w[i] -= beta;
    basis.push_back(std::move(w));
  }
  if (basis.empty()) return QuadraticForm(t);
  return diagonalize(GramForm(t, restricted_gram(q, basis))).form;
}

namespace {

// Removes pairs {d, -d} of canonical entries; returns the number removed.
std::size_t cancel_pairs(std::vector<Element>& d) {
  std::size_t pairs = 0;
  std::vector<bool> used(d.size(), false);
  std::vector<Element> negs;
  negs.reserve(d.size());
  for (const auto& x : d) negs.push_back(canonical_square_class(-x));
  for (std::size_t a = 0; a < d.size(); ++a) {
    if (used[a]) continue;
    for (std::size_t b = a + 1; b < d.size(); ++b) {
      if (!used[b] && d[b] == negs[a]) {
        used[a] = used[b] = true;
        ++pairs;
        break;
      }
    }
  }
  std::vector<Element> rest;
  for (std::size_t a = 0; a < d.size(); ++a) {
    if (!used[a]) rest.push_back(d[a]);
  }
  d = std::move(rest);
  return pairs;
}

}  // namespace

WittDecomposition witt_decompose(const QuadraticForm& q, const WittOptions& options) {
  const FieldTower* t = q.tower();
  require_supported(t);
  WittDecomposition out;
  std::vector<Element> d = canonicalize(q).diag();
  out.witt_index = cancel_pairs(d);
  auto reached = [&] { return options.target_index && out.witt_index >= *options.target_index; };
  while (!reached()) {
    QuadraticForm cur(t, d);
    auto z = find_isotropic_vector(cur, options.degree_cap);
    if (!z) break;
    d = canonicalize(split_hyperbolic_plane(cur, *z)).diag();
    out.witt_index += 1 + cancel_pairs(d);
  }
  std::sort(d.begin(), d.end());
  out.anisotropic_kernel = QuadraticForm(t, std::move(d));
  out.complete = !reached() || !is_isotropic(out.anisotropic_kernel);
  return out;
}

bool isometric(const QuadraticForm& a, const QuadraticForm& b, const WittOptions& options) {
  require_same_tower(a.tower(), b.tower());
  if (a.dim() != b.dim()) return false;
  if (a.dim() == 0) return true;
  WittOptions o = options;
  o.target_index = a.dim();
  return witt_decompose(orthogonal_sum(a, negated(b)), o).witt_index == a.dim();
}

}  // namespace qfl
