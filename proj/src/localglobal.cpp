#include "qfl/localglobal.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <mutex>

#include "qfl/errors.hpp"
#include "qfl/fields.hpp"

namespace qfl {

namespace {

using Elem = FiniteField::Elem;

struct Frac {
  FqPoly num;
  FqPoly den;
};

void require_global(const FieldTower* t) {
  if (t->depth() != 1 || !t->outer_is_rational()) {
    fail(ErrorCode::UnsupportedTower, "expected GF(q)(X), got " + t->to_string());
  }
}

Frac to_frac(const Element& a) { return {to_fq_poly(a.numerator()), to_fq_poly(a.denominator())}; }

long long frac_valuation(const FiniteField& f, const Frac& a, const Place& place) {
  if (a.num.empty()) fail(ErrorCode::ZeroArgument, "valuation of zero");
  if (place.kind == Place::Kind::Infinity) return fq::degree(a.den) - fq::degree(a.num);
  return fq::multiplicity(f, a.num, place.poly, nullptr) - fq::multiplicity(f, a.den, place.poly, nullptr);
}

FqPoly frac_unit_residue(const FiniteField& f, const Frac& a, const Place& place) {
  if (a.num.empty()) fail(ErrorCode::ZeroArgument, "residue of zero");
  if (place.kind == Place::Kind::Infinity) return fq::constant(f.div(fq::lead(a.num), fq::lead(a.den)));
  FqPoly n, d;
  fq::multiplicity(f, a.num, place.poly, &n);
  fq::multiplicity(f, a.den, place.poly, &d);
  const auto dinv = fq::invmod(f, d, place.poly);
  return fq::mulmod(f, n, *dinv, place.poly);
}

bool residue_is_square(const FiniteField& f, const FqPoly& u, const Place& place) {
  if (place.kind == Place::Kind::Infinity) return f.is_square(u.empty() ? 0 : u[0]);
  return fq::is_square_mod(f, u, place.poly);
}

std::vector<Place> frac_places(const FiniteField& f, const std::vector<Frac>& entries) {
  std::vector<Place> out;
  for (const auto& e : entries) {
    for (const FqPoly* p : {&e.num, &e.den}) {
      if (fq::degree(*p) <= 0) continue;
      for (const auto& [g, m] : fq::factor(f, *p)) {
        (void)m;
        out.push_back(Place::finite(f, g));
      }
    }
  }
  out.push_back(Place::infinity());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool frac_locally_isotropic(const FiniteField& f, const std::vector<Frac>& entries, const Place& place) {
  std::vector<FqPoly> parts[2];
  for (const auto& e : entries) {
    const long long v = frac_valuation(f, e, place);
    parts[((v % 2) + 2) % 2].push_back(frac_unit_residue(f, e, place));
  }
  for (const auto& part : parts) {
    if (part.size() >= 3) return true;
    if (part.size() == 2) {
      FqPoly u = fq::neg(f, fq::mul(f, part[0], part[1]));
      if (place.kind == Place::Kind::Finite) u = fq::mod(f, u, place.poly);
      if (residue_is_square(f, u, place)) return true;
    }
  }
  return false;
}

// Square test of num/den in GF(q)(X).
bool frac_is_square(const FiniteField& f, const FqPoly& a) {
  if (a.empty()) return true;
  if (!f.is_square(fq::lead(a))) return false;
  return fq::sqrt_exact(f, fq::monic(f, a)).has_value();
}

GlobalIsotropyReport frac_report(const FiniteField& f, const std::vector<Frac>& entries) {
  GlobalIsotropyReport out;
  const std::size_t n = entries.size();
  if (n >= 5) {
    out.isotropic = true;
    out.rule = "dim>=5";
    return out;
  }
  if (n <= 1) {
    out.rule = n == 0 ? "dim=0" : "dim=1";
    return out;
  }
  if (n == 2) {
    // -ab is a square iff -a.num b.num a.den b.den is.
    FqPoly prod = fq::neg(f, fq::mul(f, fq::mul(f, entries[0].num, entries[0].den),
                                     fq::mul(f, entries[1].num, entries[1].den)));
    out.isotropic = frac_is_square(f, prod);
    out.rule = "dim=2";
    return out;
  }
  out.rule = "local";
  out.isotropic = true;
  for (const auto& place : frac_places(f, entries)) {
    const bool iso = frac_locally_isotropic(f, entries, place);
    out.local.push_back({place, iso});
    if (!iso) out.isotropic = false;
  }
  return out;
}

bool polys_isotropic(const FiniteField& f, const std::vector<FqPoly>& coefs) {
  std::vector<Frac> entries;
  for (const auto& c : coefs) entries.push_back({c, FqPoly{1}});
  return frac_report(f, entries).isotropic;
}

// A nonzero zero of the (possibly degenerate) quadratic form over GF(q)
// with symmetric Gram matrix g.
std::optional<std::vector<Elem>> finite_form_zero(const FiniteField& f, std::vector<std::vector<Elem>> g) {
  const std::size_t m = g.size();
  if (m == 0) return std::nullopt;
  std::vector<std::vector<Elem>> tr(m, std::vector<Elem>(m, 0));  // columns are basis vectors
  for (std::size_t i = 0; i < m; ++i) tr[i][i] = 1;
  auto add_col = [&](std::size_t dst, std::size_t src, Elem c) {
    // basis_dst += c * basis_src, as a congruence on g.
    for (std::size_t r = 0; r < m; ++r) g[r][dst] = f.add(g[r][dst], f.mul(c, g[r][src]));
    for (std::size_t r = 0; r < m; ++r) g[dst][r] = f.add(g[dst][r], f.mul(c, g[src][r]));
    for (std::size_t r = 0; r < m; ++r) tr[r][dst] = f.add(tr[r][dst], f.mul(c, tr[r][src]));
  };
  auto column = [&](std::size_t i) {
    std::vector<Elem> v(m);
    for (std::size_t r = 0; r < m; ++r) v[r] = tr[r][i];
    return v;
  };
  for (std::size_t i = 0; i < m; ++i) {
    if (g[i][i] == 0) {
      std::size_t j = i + 1;
      while (j < m && g[i][j] == 0) ++j;
      if (j == m) return column(i);
      // q(e_i + c e_j) = 2c g_ij + c^2 g_jj is nonzero for c = 1 or c = -1.
      add_col(i, j, f.add(f.add(g[i][j], g[i][j]), g[j][j]) != 0 ? 1 : f.neg(1));
    }
    for (std::size_t j = i + 1; j < m; ++j) {
      if (g[i][j] == 0) continue;
      add_col(j, i, f.neg(f.div(g[i][j], g[i][i])));
    }
  }
  std::vector<Elem> z(m, 0);
  if (m == 1) return std::nullopt;
  const Elem a = g[0][0], b = g[1][1];
  bool found = false;
  if (auto r = f.sqrt(f.neg(f.div(b, a)))) {
    z[0] = *r;
    z[1] = 1;
    found = true;
  } else if (m >= 3) {
    const Elem c = g[2][2];
    for (Elem x = 0; x < f.order() && !found; ++x) {
      const Elem rhs = f.div(f.sub(f.neg(c), f.mul(a, f.mul(x, x))), b);
      if (auto y = f.sqrt(rhs)) {
        z[0] = x;
        z[1] = *y;
        z[2] = 1;
        found = true;
      }
    }
  }
  if (!found) return std::nullopt;
  std::vector<Elem> out(m, 0);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < m; ++c) out[r] = f.add(out[r], f.mul(tr[r][c], z[c]));
  }
  return out;
}

// x = r_j mod m_j for pairwise coprime moduli; constant moduli are skipped.
FqPoly crt(const FiniteField& f, const std::vector<FqPoly>& residues, const std::vector<FqPoly>& moduli) {
  FqPoly x;
  FqPoly acc{1};
  for (std::size_t j = 0; j < moduli.size(); ++j) {
    if (fq::degree(moduli[j]) <= 0) continue;
    const FqPoly diff = fq::mod(f, fq::sub(f, residues[j], x), moduli[j]);
    const auto inv = fq::invmod(f, fq::mod(f, acc, moduli[j]), moduli[j]);
    if (!inv) fail(ErrorCode::Internal, "CRT moduli are not coprime");
    x = fq::add(f, x, fq::mul(f, acc, fq::mulmod(f, diff, *inv, moduli[j])));
    acc = fq::mul(f, acc, moduli[j]);
  }
  return fq::mod(f, x, acc);
}

using Triple = std::array<FqPoly, 3>;

FqPoly eval3(const FiniteField& f, const Triple& c, const Triple& u, const Triple& w) {
  FqPoly s;
  for (int i = 0; i < 3; ++i) s = fq::add(f, s, fq::mul(f, c[i], fq::mul(f, u[i], w[i])));
  return s;
}

bool is_zero3(const Triple& v) { return v[0].empty() && v[1].empty() && v[2].empty(); }

// Doubled shifted degree and the rightmost index attaining it.
std::pair<int, int> shifted_degree(const Triple& v, const std::array<int, 3>& w) {
  int best = -1, pivot = -1;
  for (int i = 0; i < 3; ++i) {
    if (v[i].empty()) continue;
    const int d = 2 * fq::degree(v[i]) + w[i];
    if (d >= best) {
      best = d;
      pivot = i;
    }
  }
  return {best, pivot};
}

// Mulders-Storjohann reduction to weak Popov form.
std::vector<Triple> weak_popov(const FiniteField& f, std::vector<Triple> rows, const std::array<int, 3>& w) {
  for (;;) {
    rows.erase(std::remove_if(rows.begin(), rows.end(), is_zero3), rows.end());
    bool changed = false;
    for (std::size_t i = 0; i < rows.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < rows.size() && !changed; ++j) {
        const int pi = shifted_degree(rows[i], w).second;
        if (pi != shifted_degree(rows[j], w).second) continue;
        std::size_t hi = i, lo = j;
        if (fq::degree(rows[i][pi]) < fq::degree(rows[j][pi])) std::swap(hi, lo);
        const int shift = fq::degree(rows[hi][pi]) - fq::degree(rows[lo][pi]);
        const Elem c = f.div(fq::lead(rows[hi][pi]), fq::lead(rows[lo][pi]));
        for (int k = 0; k < 3; ++k) {
          rows[hi][k] = fq::sub(f, rows[hi][k], fq::shift(fq::scale(f, rows[lo][k], c), shift));
        }
        changed = true;
      }
    }
    if (!changed) return rows;
  }
}

constexpr std::size_t kMaxSignCombos = 1u << 12;

// a x^2 + b y^2 + c z^2 = 0 with a, b, c nonzero and squarefree.
std::optional<Triple> legendre(const FiniteField& f, const Triple& coef, Rng& rng) {
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const FqPoly g = fq::gcd(f, coef[i], coef[j]);
      if (fq::degree(g) <= 0) continue;
      const int k = 3 - i - j;
      const FqPoly h = fq::gcd(f, g, coef[k]);
      Triple next;
      next[i] = fq::div_exact(f, coef[i], g);
      next[j] = fq::div_exact(f, coef[j], g);
      next[k] = fq::mul(f, fq::div_exact(f, g, h), fq::div_exact(f, coef[k], h));
      auto sub = legendre(f, next, rng);
      if (!sub) return std::nullopt;
      Triple out;
      out[i] = fq::mul(f, (*sub)[i], h);
      out[j] = fq::mul(f, (*sub)[j], h);
      out[k] = fq::mul(f, (*sub)[k], g);
      return out;
    }
  }
  const std::array<int, 3> w{fq::degree(coef[0]), fq::degree(coef[1]), fq::degree(coef[2])};
  if (w[0] == 0 && w[1] == 0 && w[2] == 0) {
    std::vector<std::vector<Elem>> g(3, std::vector<Elem>(3, 0));
    for (int i = 0; i < 3; ++i) g[i][i] = coef[i][0];
    auto z = finite_form_zero(f, g);
    if (!z) return std::nullopt;
    return Triple{fq::constant((*z)[0]), fq::constant((*z)[1]), fq::constant((*z)[2])};
  }
  // Square roots of -c/b mod a, -c/a mod b, -b/a mod c, per prime factor.
  struct Root {
    int index;
    FqPoly prime;
    FqPoly root;
  };
  std::vector<Root> roots;
  const std::array<std::pair<int, int>, 3> ratio{{{2, 1}, {2, 0}, {1, 0}}};
  for (int i = 0; i < 3; ++i) {
    if (w[i] == 0) continue;
    for (const auto& [prime, m] : fq::factor(f, coef[i])) {
      (void)m;
      const auto den = fq::invmod(f, fq::mod(f, coef[ratio[i].second], prime), prime);
      const FqPoly target = fq::neg(f, fq::mulmod(f, fq::mod(f, coef[ratio[i].first], prime), *den, prime));
      auto r = fq::sqrt_mod(f, target, prime, rng);
      if (!r) return std::nullopt;
      roots.push_back({i, prime, *r});
    }
  }
  const FqPoly modulus = fq::mul(f, fq::mul(f, coef[0], coef[1]), coef[2]);
  const int s = w[0] + w[1] + w[2];
  const std::vector<FqPoly> moduli{coef[0], coef[1], coef[2]};
  const std::size_t combos = std::min<std::size_t>(std::size_t{1} << std::min<std::size_t>(roots.size(), 20), kMaxSignCombos);
  for (std::size_t mask = 0; mask < combos; ++mask) {
    std::array<std::vector<FqPoly>, 3> res, mods;
    for (std::size_t r = 0; r < roots.size(); ++r) {
      const bool flip = (mask >> r) & 1;
      res[roots[r].index].push_back(flip ? fq::neg(f, roots[r].root) : roots[r].root);
      mods[roots[r].index].push_back(roots[r].prime);
    }
    const FqPoly lambda = crt(f, res[0], mods[0]);
    const FqPoly mu = crt(f, res[1], mods[1]);
    const FqPoly nu = crt(f, res[2], mods[2]);
    // Linear form alpha x + beta y + gamma z vanishing mod abc on solutions:
    // y = lambda z (mod a), x = mu z (mod b), x = nu y (mod c).
    const FqPoly one{1};
    const FqPoly alpha = crt(f, {FqPoly{}, one, one}, moduli);
    const FqPoly beta = crt(f, {one, FqPoly{}, fq::neg(f, nu)}, moduli);
    const FqPoly gamma = crt(f, {fq::neg(f, lambda), fq::neg(f, mu), FqPoly{}}, moduli);
    std::vector<Triple> gens{Triple{modulus, FqPoly{}, FqPoly{}},          Triple{FqPoly{}, modulus, FqPoly{}},
                             Triple{FqPoly{}, FqPoly{}, modulus},          Triple{beta, fq::neg(f, alpha), FqPoly{}},
                             Triple{gamma, FqPoly{}, fq::neg(f, alpha)}, Triple{FqPoly{}, gamma, fq::neg(f, beta)}};
    const std::vector<Triple> reduced = weak_popov(f, gens, w);
    std::vector<Triple> basis;
    for (const auto& row : reduced) {
      const int d = shifted_degree(row, w).first;
      for (int k = 0; d + 2 * k <= s; ++k) {
        basis.push_back({fq::shift(row[0], k), fq::shift(row[1], k), fq::shift(row[2], k)});
      }
    }
    if (basis.empty()) continue;
    // On this span Q takes values kappa * abc with kappa in GF(q).
    const Elem lc_inv = f.inv(fq::lead(modulus));
    std::vector<std::vector<Elem>> gram(basis.size(), std::vector<Elem>(basis.size(), 0));
    for (std::size_t i = 0; i < basis.size(); ++i) {
      for (std::size_t j = i; j < basis.size(); ++j) {
        const FqPoly v = eval3(f, coef, basis[i], basis[j]);
        const Elem top = static_cast<int>(v.size()) > s ? v[s] : 0;
        gram[i][j] = gram[j][i] = f.mul(top, lc_inv);
      }
    }
    auto z = finite_form_zero(f, gram);
    if (!z) continue;
    Triple sol;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      for (int k = 0; k < 3; ++k) sol[k] = fq::add(f, sol[k], fq::scale(f, basis[i][k], (*z)[i]));
    }
    if (!is_zero3(sol) && eval3(f, coef, sol, sol).empty()) return sol;
  }
  return std::nullopt;
}

// Sum c_i w_i^2 = 0 over GF(q)[X] for squarefree nonzero c_i.
std::optional<std::vector<FqPoly>> solve_squarefree(const FiniteField& f, const std::vector<FqPoly>& c, int cap,
                                                    Rng& rng) {
  const std::size_t n = c.size();
  if (n < 2) return std::nullopt;
  if (n >= 6) {
    auto sub = solve_squarefree(f, std::vector<FqPoly>(c.begin(), c.begin() + 5), cap, rng);
    if (!sub) fail(ErrorCode::Internal, "five-dimensional form without a zero");
    sub->resize(n);
    return sub;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const FqPoly t = fq::neg(f, fq::mul(f, c[i], c[j]));
      if (!f.is_square(fq::lead(t))) continue;
      auto r = fq::sqrt_exact(f, fq::monic(f, t));
      if (!r) continue;
      std::vector<FqPoly> out(n);
      out[i] = fq::scale(f, *r, *f.sqrt(fq::lead(t)));
      out[j] = c[i];
      return out;
    }
  }
  if (n == 2) return std::nullopt;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        if (!polys_isotropic(f, {c[i], c[j], c[k]})) continue;
        auto sol = legendre(f, {c[i], c[j], c[k]}, rng);
        if (!sol) fail(ErrorCode::Internal, "no zero found for an isotropic ternary form");
        std::vector<FqPoly> out(n);
        out[i] = (*sol)[0];
        out[j] = (*sol)[1];
        out[k] = (*sol)[2];
        return out;
      }
    }
  }
  if (n == 3) return std::nullopt;
  // Split off a value c_a x1^2 + c_b x2^2 that the rest also represents;
  // low degrees first since every new prime factor of the value is a
  // further local condition on the rest.
  const std::vector<std::pair<std::size_t, std::size_t>> pairs{{0, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 3}, {2, 3}};
  for (int deg = 0; 2 * deg <= cap; ++deg) {
    for (int attempt = 0; attempt < 96; ++attempt) {
      const auto [a, b] = pairs[attempt % pairs.size()];
      const FqPoly x1 = fq::random_poly(f, deg, rng);
      const FqPoly x2 = fq::random_poly(f, deg, rng);
      const FqPoly v = fq::add(f, fq::mul(f, c[a], fq::mul(f, x1, x1)), fq::mul(f, c[b], fq::mul(f, x2, x2)));
      if (v.empty()) continue;
      const FqPoly kernel = fq::scale(f, fq::squarefree_kernel(f, v), fq::lead(v));
      const FqPoly sq = *fq::sqrt_exact(f, fq::div_exact(f, v, kernel));
      std::vector<FqPoly> rest{kernel};
      std::vector<std::size_t> others;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != a && k != b) {
          rest.push_back(c[k]);
          others.push_back(k);
        }
      }
      if (!polys_isotropic(f, rest)) continue;
      auto sub = solve_squarefree(f, rest, cap, rng);
      if (!sub) continue;
      // kernel u0^2 + sum c_k u_k^2 = 0, times sq^2.
      std::vector<FqPoly> out(n);
      out[a] = fq::mul(f, x1, (*sub)[0]);
      out[b] = fq::mul(f, x2, (*sub)[0]);
      for (std::size_t k = 0; k < others.size(); ++k) out[others[k]] = fq::mul(f, sq, (*sub)[k + 1]);
      bool nonzero = false;
      for (const auto& o : out) nonzero = nonzero || !o.empty();
      if (nonzero) return out;
    }
  }
  fail(ErrorCode::BudgetExceeded, "isotropic vector search exceeded degree cap " + std::to_string(cap));
}

}  // namespace

Place Place::finite(const FiniteField& f, const FqPoly& p) {
  Place out;
  out.kind = Kind::Finite;
  out.poly = fq::monic(f, p);
  out.degree = fq::degree(out.poly);
  return out;
}

bool Place::operator<(const Place& o) const {
  if (kind != o.kind) return kind == Kind::Finite;
  if (degree != o.degree) return degree < o.degree;
  return fq::less(poly, o.poly);
}

std::string Place::to_string(const FieldTower* tower) const {
  if (kind == Kind::Infinity) return "inf";
  return from_fq_poly(tower, poly).to_string();
}

long long place_valuation(const Element& a, const Place& place) {
  require_global(a.tower());
  return frac_valuation(a.tower()->base(), to_frac(a), place);
}

FqPoly place_unit_residue(const Element& a, const Place& place) {
  require_global(a.tower());
  return frac_unit_residue(a.tower()->base(), to_frac(a), place);
}

std::vector<Place> places_of_interest(const QuadraticForm& q) {
  require_global(q.tower());
  std::vector<Frac> entries;
  for (const auto& d : q.diag()) entries.push_back(to_frac(d));
  return frac_places(q.tower()->base(), entries);
}

Completion localize(const QuadraticForm& q, const Place& place) {
  const FieldTower* t = q.tower();
  require_global(t);
  const FiniteField& f = t->base();
  Completion out;
  out.place = place;
  out.field = t->base_ptr();
  for (const auto& d : q.diag()) {
    const Frac e = to_frac(d);
    out.entries.push_back({frac_valuation(f, e, place), frac_unit_residue(f, e, place)});
  }
  if (place.kind == Place::Kind::Infinity) {
    out.residue_tower = t->inner();
    for (const auto& e : out.entries) out.residues.push_back(Element::scalar(t->inner(), e.residue[0]));
    return out;
  }
  for (const auto& e : out.entries) {
    auto r = residue_element(t, place, e.residue);
    if (!r) {
      out.residues.clear();
      return out;
    }
    out.residue_tower = r->tower();
    out.residues.push_back(*r);
  }
  return out;
}

bool is_locally_isotropic(const Completion& c) {
  if (!c.field) fail(ErrorCode::InvalidArgument, "completion without a field");
  const FiniteField& f = *c.field;
  std::vector<FqPoly> parts[2];
  for (const auto& e : c.entries) parts[((e.valuation % 2) + 2) % 2].push_back(e.residue);
  for (const auto& part : parts) {
    if (part.size() >= 3) return true;
    if (part.size() == 2) {
      FqPoly u = fq::neg(f, fq::mul(f, part[0], part[1]));
      if (c.place.kind == Place::Kind::Finite) u = fq::mod(f, u, c.place.poly);
      if (residue_is_square(f, u, c.place)) return true;
    }
  }
  return false;
}

GlobalIsotropyReport global_isotropy_report(const QuadraticForm& q) {
  require_global(q.tower());
  std::vector<Frac> entries;
  for (const auto& d : q.diag()) entries.push_back(to_frac(d));
  return frac_report(q.tower()->base(), entries);
}

bool is_isotropic_global(const QuadraticForm& q) { return global_isotropy_report(q).isotropic; }

std::optional<Vector> global_isotropic_vector(const QuadraticForm& q, int degree_cap) {
  const FieldTower* t = q.tower();
  require_global(t);
  const FiniteField& f = t->base();
  if (!is_isotropic_global(q)) return std::nullopt;
  // d_i = num_i / den_i; with x_i = den_i w_i / s_i the equation becomes
  // sum k_i w_i^2 = 0 where num_i den_i = k_i s_i^2 and k_i is squarefree.
  std::vector<FqPoly> kernels, squares, dens;
  for (const auto& d : q.diag()) {
    const Frac e = to_frac(d);
    const FqPoly prod = fq::mul(f, e.num, e.den);
    const FqPoly kernel = fq::scale(f, fq::squarefree_kernel(f, prod), fq::lead(prod));
    kernels.push_back(kernel);
    squares.push_back(*fq::sqrt_exact(f, fq::div_exact(f, prod, kernel)));
    dens.push_back(e.den);
  }
  Rng rng(0x51f15e5eedULL);
  auto w = solve_squarefree(f, kernels, degree_cap, rng);
  if (!w) fail(ErrorCode::Internal, "locally isotropic form without a global zero");
  Vector z;
  for (std::size_t i = 0; i < q.dim(); ++i) {
    z.push_back(from_fq_poly(t, fq::mul(f, dens[i], (*w)[i]), squares[i]));
  }
  if (!q.evaluate(z).is_zero()) fail(ErrorCode::Internal, "global isotropic vector check failed");
  return z;
}

int hilbert_symbol(const Element& a, const Element& b, const ValuationCtx& v) {
  require_same_tower(a.tower(), v.tower());
  require_same_tower(b.tower(), v.tower());
  if (v.rank() != 1 || !v.residue_tower()->is_finite()) {
    fail(ErrorCode::UnsupportedTower, "tame symbols need a rank-1 valuation with finite residue field");
  }
  if (a.is_zero() || b.is_zero()) fail(ErrorCode::ZeroArgument, "Hilbert symbol of zero");
  const FiniteField& f = a.tower()->base();
  const long long va = v.value(a)[0], vb = v.value(b)[0];
  Elem u = ((va % 2) != 0 && (vb % 2) != 0) ? f.neg(1) : 1;
  if (vb % 2 != 0) u = f.mul(u, v.angular_component(a).scalar_value());
  if (va % 2 != 0) u = f.mul(u, v.angular_component(b).scalar_value());
  return f.is_square(u) ? 1 : -1;
}

int hilbert_symbol(const Element& a, const Element& b, const Place& place) {
  require_global(a.tower());
  require_same_tower(a.tower(), b.tower());
  if (a.is_zero() || b.is_zero()) fail(ErrorCode::ZeroArgument, "Hilbert symbol of zero");
  const FiniteField& f = a.tower()->base();
  const Frac fa = to_frac(a), fb = to_frac(b);
  const long long va = frac_valuation(f, fa, place), vb = frac_valuation(f, fb, place);
  FqPoly u = fq::constant(((va % 2) != 0 && (vb % 2) != 0) ? f.neg(1) : 1);
  auto times = [&](const FqPoly& r) {
    u = place.kind == Place::Kind::Finite ? fq::mulmod(f, u, r, place.poly) : fq::mul(f, u, r);
  };
  if (vb % 2 != 0) times(frac_unit_residue(f, fa, place));
  if (va % 2 != 0) times(frac_unit_residue(f, fb, place));
  return residue_is_square(f, u, place) ? 1 : -1;
}

std::optional<Element> residue_element(const FieldTower* global, const Place& place, const FqPoly& residue) {
  require_global(global);
  const FiniteField& f = global->base();
  if (place.kind == Place::Kind::Infinity) return Element::scalar(global->inner(), residue.empty() ? 0 : residue[0]);
  const std::uint32_t p = f.characteristic();
  const std::uint32_t k = f.degree() * static_cast<std::uint32_t>(place.degree);
  std::uint64_t order = 1;
  for (std::uint32_t i = 0; i < k; ++i) {
    order *= p;
    if (order > (1u << 16)) return std::nullopt;
  }
  const auto big = FiniteField::get(p, k);
  // Embedding GF(q) -> big (image of the base generator) and a root of the
  // place polynomial in big; both chosen as the smallest code.
  static std::mutex mu;
  static std::map<std::pair<std::vector<std::uint32_t>, std::uint64_t>, std::pair<Elem, Elem>> cache;
  const auto key = std::make_pair(std::vector<std::uint32_t>(place.poly.begin(), place.poly.end()),
                                  (std::uint64_t{p} << 40) | (std::uint64_t{f.degree()} << 20) | k);
  std::pair<Elem, Elem> roots;
  bool cached = false;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) {
      roots = it->second;
      cached = true;
    }
  }
  auto embed_with = [&](Elem beta, Elem a) {
    Elem out = 0, pw = 1;
    for (auto d : f.digits(a)) {
      out = big->add(out, big->mul(big->from_int(d), pw));
      pw = big->mul(pw, beta);
    }
    return out;
  };
  auto eval_poly = [&](Elem beta, const FqPoly& poly, Elem x) {
    Elem out = 0;
    for (std::size_t i = poly.size(); i-- > 0;) out = big->add(big->mul(out, x), embed_with(beta, poly[i]));
    return out;
  };
  if (!cached) {
    Elem beta = 0;
    if (f.degree() > 1) {
      const auto& mod = f.modulus();
      for (beta = 0; beta < big->order(); ++beta) {
        Elem acc = 0;
        for (std::size_t i = mod.size(); i-- > 0;) acc = big->add(big->mul(acc, beta), big->from_int(mod[i]));
        if (acc == 0) break;
      }
    }
    Elem alpha = 0;
    for (; alpha < big->order(); ++alpha) {
      if (eval_poly(beta, place.poly, alpha) == 0) break;
    }
    if (alpha == big->order()) fail(ErrorCode::Internal, "place polynomial has no root in its residue field");
    roots = {beta, alpha};
    std::lock_guard<std::mutex> lock(mu);
    cache[key] = roots;
  }
  const Elem value = eval_poly(roots.first, fq::mod(f, residue, place.poly), roots.second);
  return Element::scalar(FieldTower::finite(order), value);
}

}  // namespace qfl
