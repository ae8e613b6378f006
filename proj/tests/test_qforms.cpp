#include <functional>

#include "doctest.h"
#include "qfl/dsl.hpp"
#include "qfl/errors.hpp"
#include "qfl/fields.hpp"
#include "qfl/localglobal.hpp"
#include "qfl/qforms.hpp"

using namespace qfl;

namespace {

QuadraticForm form(const FieldTower* t, const std::string& s) { return parse_form(t, s); }

// Exhaustive zero search over GF(q)^n.
bool brute_isotropic(const QuadraticForm& q) {
  const FieldTower* t = q.tower();
  const std::uint64_t order = t->base().order();
  const std::size_t n = q.dim();
  std::vector<FiniteField::Elem> x(n, 0);
  std::function<bool(std::size_t, bool)> rec = [&](std::size_t i, bool nonzero) -> bool {
    if (i == n) {
      if (!nonzero) return false;
      Vector v;
      for (auto c : x) v.push_back(Element::scalar(t, c));
      return q.evaluate(v).is_zero();
    }
    for (FiniteField::Elem c = 0; c < order; ++c) {
      x[i] = c;
      if (rec(i + 1, nonzero || c != 0)) return true;
    }
    return false;
  };
  return rec(0, false);
}

// Isotropy of a form over GF(q)((t)) of dim 3 or 4 via tame symbols.
bool symbol_isotropic(const QuadraticForm& q) {
  const ValuationCtx v = ValuationCtx::outer(q.tower());
  const auto& d = q.diag();
  if (d.size() == 3) return hilbert_symbol(-d[0] * d[2], -d[1] * d[2], v) == 1;
  if (!is_square(d[0] * d[1] * d[2] * d[3])) return true;
  return hilbert_symbol(-d[0] * d[1], -d[0] * d[2], v) == 1;
}

}  // namespace

TEST_CASE("diagonalize examples") {
  const FieldTower* f3 = FieldTower::finite(3);
  const FieldTower* f5 = FieldTower::finite(5);
  for (auto [t, text] : {std::pair{f3, "gram[[0,1],[1,0]]"}, std::pair{f3, "gram[[1,0],[0,1]]"},
                         std::pair{f5, "gram[[1,1],[1,0]]"}}) {
    const GramForm g = parse_gram(t, text);
    const Diagonalization dz = diagonalize(g);
    const Matrix& tm = dz.change_of_basis;
    const std::size_t n = g.dim();
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        Element s = Element::zero(t);
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < n; ++j) s += tm[i][a] * g.gram()[i][j] * tm[j][b];
        }
        CHECK(s == (a == b ? dz.form[a] : Element::zero(t)));
      }
    }
    // det(T^t G T) = det(G) det(T)^2 in both square classes.
    const Element det_g = g.gram()[0][0] * g.gram()[1][1] - g.gram()[0][1] * g.gram()[1][0];
    CHECK(is_square(dz.form.determinant() * det_g));
  }
  CHECK(diagonalize(parse_gram(f3, "gram[[1,0],[0,1]]")).form == form(f3, "diag[1,1]"));
  CHECK_THROWS_AS(diagonalize(parse_gram(f3, "gram[[1,1],[1,1]]")), Error);
  CHECK_THROWS_AS(parse_gram(f3, "gram[[1,2],[1,1]]"), Error);
}

TEST_CASE("isotropy examples") {
  const FieldTower* f3 = FieldTower::finite(3);
  const FieldTower* f5 = FieldTower::finite(5);
  const FieldTower* l3 = parse_field("GF(3)((t))");
  CHECK_FALSE(is_isotropic(form(f3, "diag[1,1]")));
  CHECK(is_isotropic(form(f5, "diag[1,1]")));
  CHECK(is_isotropic(form(f3, "diag[1,1,1]")));
  CHECK_FALSE(is_isotropic(form(l3, "diag[1,-2,t,-2*t]")));
  CHECK_FALSE(symbol_isotropic(form(l3, "diag[1,-2,t,-2*t]")));
  CHECK_FALSE(is_isotropic(form(f3, "diag[1]")));
  CHECK_THROWS_AS(QuadraticForm(f3, {Element::zero(f3)}), Error);
}

TEST_CASE("finite isotropy matches exhaustive search") {
  for (std::uint64_t q : {3, 5}) {
    const FieldTower* t = FieldTower::finite(q);
    std::vector<FiniteField::Elem> d;
    std::function<void(std::size_t)> rec = [&](std::size_t n) {
      if (!d.empty()) {
        std::vector<Element> e;
        for (auto c : d) e.push_back(Element::scalar(t, c));
        QuadraticForm f(t, e);
        CHECK(is_isotropic(f) == brute_isotropic(f));
      }
      if (n == 0) return;
      for (FiniteField::Elem c = 1; c < q; ++c) {
        d.push_back(c);
        rec(n - 1);
        d.pop_back();
      }
    };
    rec(4);
  }
}

TEST_CASE("Laurent isotropy matches tame symbols") {
  for (std::uint64_t q : {3, 5, 7}) {
    const FieldTower* t = parse_field("GF(" + std::to_string(q) + ")((t))");
    Rng rng(q);
    for (int i = 0; i < 150; ++i) {
      const std::size_t n = 3 + rng() % 2;
      std::vector<Element> d;
      for (std::size_t k = 0; k < n; ++k) d.push_back(sample(t, SampleBudget{}, rng));
      QuadraticForm f(t, d);
      CHECK(is_isotropic(f) == symbol_isotropic(f));
    }
  }
}

TEST_CASE("Witt decomposition") {
  const FieldTower* f3 = FieldTower::finite(3);
  auto w = witt_decompose(form(f3, "diag[1,-1]"));
  CHECK(w.witt_index == 1);
  CHECK(w.anisotropic_kernel.empty());
  w = witt_decompose(form(f3, "diag[1,1,1,1]"));
  CHECK(w.witt_index == 2);
  CHECK(w.anisotropic_kernel.empty());

  for (const char* field : {"GF(3)", "GF(5)((t))", "GF(3)((t))((u))", "GF(3)(X)"}) {
    const FieldTower* t = parse_field(field);
    Rng rng(11);
    const int rounds = t->outer_is_rational() ? 12 : 40;
    for (int i = 0; i < rounds; ++i) {
      const std::size_t n = 1 + rng() % 5;
      std::vector<Element> d;
      for (std::size_t k = 0; k < n; ++k) d.push_back(sample(t, SampleBudget{}, rng));
      QuadraticForm f(t, d);
      const WittDecomposition wd = witt_decompose(f);
      CHECK(2 * wd.witt_index + wd.anisotropic_kernel.dim() == f.dim());
      CHECK_FALSE(is_isotropic(wd.anisotropic_kernel));
      CHECK(wd.complete);
      CHECK(witt_decompose(orthogonal_sum(f, negated(f))).witt_index == f.dim());
    }
  }
}

TEST_CASE("isometry examples and invariants") {
  const FieldTower* f3 = FieldTower::finite(3);
  const FieldTower* f5 = FieldTower::finite(5);
  const FieldTower* l5 = parse_field("GF(5)((t))");
  CHECK(isometric(form(f5, "diag[1,1]"), form(f5, "diag[2,2]")));
  CHECK_FALSE(isometric(form(f3, "diag[1]"), form(f3, "diag[2]")));
  CHECK(isometric(form(l5, "diag[1,1,-t,-t]"), form(l5, "diag[1,1,-2*t,-2*t]")));
  CHECK_FALSE(isometric(form(f3, "diag[1,1]"), form(f3, "diag[1]")));
  CHECK_THROWS_AS(isometric(form(f3, "diag[1]"), form(f5, "diag[1]")), Error);

  for (const char* field : {"GF(5)((t))", "GF(3)((t))((u))", "GF(3)(X)"}) {
    const FieldTower* t = parse_field(field);
    Rng rng(5);
    const int rounds = t->outer_is_rational() ? 8 : 30;
    for (int i = 0; i < rounds; ++i) {
      const std::size_t n = 1 + rng() % 3;
      std::vector<Element> a, a2, p;
      for (std::size_t k = 0; k < n; ++k) {
        a.push_back(sample(t, SampleBudget{}, rng));
        const Element s = sample(t, SampleBudget{1, 1}, rng);
        a2.push_back(a.back() * s * s);
      }
      for (std::size_t k = 0; k < 2; ++k) p.push_back(sample(t, SampleBudget{}, rng));
      const QuadraticForm q(t, a), q2(t, a2), pp(t, p);
      // Cancellation with q' a square rescaling of q.
      CHECK(isometric(orthogonal_sum(q, pp), orthogonal_sum(q2, pp)));
      CHECK(isometric(q, q2));
      std::vector<Element> b;
      for (std::size_t k = 0; k < n; ++k) b.push_back(sample(t, SampleBudget{}, rng));
      const QuadraticForm r(t, b);
      if (isometric(q, r)) CHECK(is_square(q.determinant() * r.determinant()));
    }
  }
}

TEST_CASE("combine") {
  const FieldTower* f3 = FieldTower::finite(3);
  const FieldTower* l = parse_field("GF(5)((a))((b))");
  CHECK(combine(form(f3, "diag[1]"), form(f3, "diag[2]"), CombineOp::OrthogonalSum) == form(f3, "diag[1,2]"));
  const Element two = Element::from_int(f3, 2);
  CHECK(combine(form(f3, "diag[1,2]"), QuadraticForm(f3), CombineOp::Scale, &two) == form(f3, "diag[2,1]"));
  CHECK(combine(form(l, "diag[1,-b]"), form(l, "diag[1,-a]"), CombineOp::TensorBilinear) ==
        form(l, "diag[1,-b,-a,a*b]"));
  const Element zero = Element::zero(f3);
  CHECK_THROWS_AS(combine(form(f3, "diag[1]"), QuadraticForm(f3), CombineOp::Scale, &zero), Error);
  CHECK_THROWS_AS(combine(form(f3, "diag[1]"), form(l, "diag[1]"), CombineOp::OrthogonalSum), Error);
}

TEST_CASE("split off hyperbolic planes") {
  const FieldTower* t = parse_field("GF(5)(X)");
  const QuadraticForm q = form(t, "diag[1, X, -X, 2, X+1]");
  const Vector z{Element::zero(t), Element::one(t), Element::one(t), Element::zero(t), Element::zero(t)};
  const QuadraticForm rest = split_hyperbolic_plane(q, z);
  CHECK(rest.dim() == 3);
  CHECK(isometric(orthogonal_sum(rest, form(t, "diag[1,-1]")), q));
  CHECK_THROWS_AS(split_hyperbolic_plane(q, Vector(5, Element::one(t))), Error);
}
