#include "qfl/fq_poly.hpp"

#include <algorithm>

#include "qfl/errors.hpp"

namespace qfl::fq {

using Elem = FiniteField::Elem;

void trim(FqPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int degree(const FqPoly& a) { return static_cast<int>(a.size()) - 1; }

FqPoly constant(Elem c) { return c == 0 ? FqPoly{} : FqPoly{c}; }

FqPoly monomial(const FiniteField&, Elem c, std::size_t k) {
  if (c == 0) return {};
  FqPoly r(k + 1, 0);
  r[k] = c;
  return r;
}

FqPoly x_poly() { return FqPoly{0, 1}; }

FqPoly add(const FiniteField& f, const FqPoly& a, const FqPoly& b) {
  FqPoly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    Elem x = i < a.size() ? a[i] : 0;
    Elem y = i < b.size() ? b[i] : 0;
    r[i] = f.add(x, y);
  }
  trim(r);
  return r;
}

FqPoly neg(const FiniteField& f, const FqPoly& a) {
  FqPoly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = f.neg(a[i]);
  return r;
}

FqPoly sub(const FiniteField& f, const FqPoly& a, const FqPoly& b) {
  FqPoly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    Elem x = i < a.size() ? a[i] : 0;
    Elem y = i < b.size() ? b[i] : 0;
    r[i] = f.sub(x, y);
  }
  trim(r);
  return r;
}

FqPoly mul(const FiniteField& f, const FqPoly& a, const FqPoly& b) {
  if (a.empty() || b.empty()) return {};
  FqPoly r(a.size() + b.size() - 1, 0);
  if (f.degree() == 1) {
    const std::uint64_t p = f.characteristic();
    std::vector<std::uint64_t> acc(r.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < b.size(); ++j) {
        acc[i + j] = (acc[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % p;
      }
    }
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = static_cast<Elem>(acc[i]);
  } else {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = f.add(r[i + j], f.mul(a[i], b[j]));
    }
  }
  trim(r);
  return r;
}

FqPoly scale(const FiniteField& f, const FqPoly& a, Elem c) {
  if (c == 0) return {};
  FqPoly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = f.mul(a[i], c);
  return r;
}

FqPoly shift(const FqPoly& a, std::size_t k) {
  if (a.empty()) return {};
  FqPoly r(k, 0);
  r.insert(r.end(), a.begin(), a.end());
  return r;
}

void divmod(const FiniteField& f, const FqPoly& a, const FqPoly& b, FqPoly* q, FqPoly* r) {
  if (b.empty()) fail(ErrorCode::DivisionByZero, "polynomial division by zero");
  FqPoly rem = a;
  trim(rem);
  FqPoly quot;
  if (rem.size() >= b.size()) quot.assign(rem.size() - b.size() + 1, 0);
  const Elem li = f.inv(b.back());
  while (rem.size() >= b.size()) {
    const std::size_t s = rem.size() - b.size();
    const Elem c = f.mul(rem.back(), li);
    quot[s] = c;
    for (std::size_t i = 0; i < b.size(); ++i) rem[s + i] = f.sub(rem[s + i], f.mul(c, b[i]));
    trim(rem);
  }
  if (q) {
    trim(quot);
    *q = std::move(quot);
  }
  if (r) *r = std::move(rem);
}

FqPoly div_exact(const FiniteField& f, const FqPoly& a, const FqPoly& b) {
  FqPoly q, r;
  divmod(f, a, b, &q, &r);
  if (!r.empty()) fail(ErrorCode::Internal, "inexact polynomial division");
  return q;
}

FqPoly mod(const FiniteField& f, const FqPoly& a, const FqPoly& m) {
  if (a.size() < m.size()) {
    FqPoly r = a;
    trim(r);
    return r;
  }
  FqPoly r;
  divmod(f, a, m, nullptr, &r);
  return r;
}

Elem lead(const FqPoly& a) { return a.empty() ? 0 : a.back(); }

FqPoly monic(const FiniteField& f, const FqPoly& a) {
  if (a.empty() || a.back() == 1) return a;
  return scale(f, a, f.inv(a.back()));
}

FqPoly gcd(const FiniteField& f, const FqPoly& a, const FqPoly& b) {
  FqPoly x = a, y = b;
  trim(x);
  trim(y);
  while (!y.empty()) {
    FqPoly r = mod(f, x, y);
    x = std::move(y);
    y = std::move(r);
  }
  return monic(f, x);
}

FqPoly xgcd(const FiniteField& f, const FqPoly& a, const FqPoly& b, FqPoly* s, FqPoly* t) {
  FqPoly r0 = a, r1 = b;
  trim(r0);
  trim(r1);
  FqPoly s0{1}, s1{}, t0{}, t1{1};
  while (!r1.empty()) {
    FqPoly q, r;
    divmod(f, r0, r1, &q, &r);
    FqPoly s2 = sub(f, s0, mul(f, q, s1));
    FqPoly t2 = sub(f, t0, mul(f, q, t1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.empty()) {
    if (s) *s = {};
    if (t) *t = {};
    return {};
  }
  const Elem li = f.inv(r0.back());
  if (s) *s = scale(f, s0, li);
  if (t) *t = scale(f, t0, li);
  return scale(f, r0, li);
}

FqPoly derivative(const FiniteField& f, const FqPoly& a) {
  if (a.size() <= 1) return {};
  FqPoly r(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = f.mul(a[i], f.from_int(static_cast<long long>(i)));
  trim(r);
  return r;
}

Elem eval(const FiniteField& f, const FqPoly& a, Elem x) {
  Elem r = 0;
  for (std::size_t i = a.size(); i-- > 0;) r = f.add(f.mul(r, x), a[i]);
  return r;
}

FqPoly reverse(const FqPoly& a, std::size_t n) {
  FqPoly r(n + 1, 0);
  for (std::size_t i = 0; i < a.size() && i <= n; ++i) r[n - i] = a[i];
  trim(r);
  return r;
}

FqPoly mulmod(const FiniteField& f, const FqPoly& a, const FqPoly& b, const FqPoly& m) {
  return mod(f, mul(f, a, b), m);
}

FqPoly powmod(const FiniteField& f, const FqPoly& a, const BigInt& e, const FqPoly& m) {
  FqPoly result = mod(f, FqPoly{1}, m);
  FqPoly base = mod(f, a, m);
  const std::size_t bits = e == 0 ? 0 : boost::multiprecision::msb(e) + 1;
  for (std::size_t i = bits; i-- > 0;) {
    result = mulmod(f, result, result, m);
    if (boost::multiprecision::bit_test(e, static_cast<unsigned>(i))) result = mulmod(f, result, base, m);
  }
  return result;
}

std::optional<FqPoly> invmod(const FiniteField& f, const FqPoly& a, const FqPoly& m) {
  FqPoly s;
  FqPoly g = xgcd(f, mod(f, a, m), m, &s, nullptr);
  if (g.size() != 1) return std::nullopt;
  return mod(f, s, m);
}

BigInt field_size_power(const FiniteField& f, std::size_t n) {
  BigInt r = 1;
  for (std::size_t i = 0; i < n; ++i) r *= static_cast<std::uint64_t>(f.order());
  return r;
}

int multiplicity(const FiniteField& f, const FqPoly& a, const FqPoly& p, FqPoly* cofactor) {
  FqPoly cur = a;
  int k = 0;
  while (true) {
    FqPoly q, r;
    divmod(f, cur, p, &q, &r);
    if (!r.empty()) break;
    cur = std::move(q);
    ++k;
  }
  if (cofactor) *cofactor = std::move(cur);
  return k;
}

namespace {

// x^q mod m
FqPoly frobenius(const FiniteField& f, const FqPoly& h, const FqPoly& m) {
  return powmod(f, h, BigInt(static_cast<std::uint64_t>(f.order())), m);
}

FqPoly pth_root(const FiniteField& f, const FqPoly& a) {
  const std::uint32_t p = f.characteristic();
  // c^(1/p) = c^(p^(k-1)) in GF(p^k).
  std::uint64_t e = 1;
  for (std::uint32_t i = 1; i < f.degree(); ++i) e *= p;
  FqPoly r((a.size() + p - 1) / p, 0);
  for (std::size_t i = 0; i < a.size(); i += p) r[i / p] = f.pow(a[i], e);
  trim(r);
  return r;
}

void equal_degree_split(const FiniteField& f, const FqPoly& g, int d, std::mt19937_64& rng, std::vector<FqPoly>& out) {
  if (degree(g) == d) {
    out.push_back(g);
    return;
  }
  const BigInt e = (field_size_power(f, static_cast<std::size_t>(d)) - 1) / 2;
  while (true) {
    FqPoly a = random_poly(f, static_cast<std::size_t>(degree(g) - 1), rng);
    if (degree(a) < 1) continue;
    FqPoly b = sub(f, powmod(f, a, e, g), FqPoly{1});
    FqPoly h = gcd(f, g, b);
    if (degree(h) > 0 && degree(h) < degree(g)) {
      equal_degree_split(f, h, d, rng, out);
      equal_degree_split(f, div_exact(f, g, h), d, rng, out);
      return;
    }
  }
}

std::vector<FqPoly> factor_squarefree(const FiniteField& f, const FqPoly& a) {
  std::vector<FqPoly> out;
  if (degree(a) < 1) return out;
  std::mt19937_64 rng(0x5eedULL + static_cast<std::uint64_t>(a.size()));
  FqPoly rest = a;
  FqPoly h = x_poly();
  int i = 0;
  while (degree(rest) >= 2 * (i + 1)) {
    ++i;
    h = frobenius(f, h, rest);
    FqPoly g = gcd(f, rest, sub(f, h, x_poly()));
    if (degree(g) > 0) {
      equal_degree_split(f, g, i, rng, out);
      rest = div_exact(f, rest, g);
      h = mod(f, h, rest);
    }
  }
  if (degree(rest) > 0) out.push_back(monic(f, rest));
  return out;
}

}  // namespace

bool is_irreducible(const FiniteField& f, const FqPoly& a) {
  const int n = degree(a);
  if (n < 1) return false;
  if (n == 1) return true;
  FqPoly m = monic(f, a);
  FqPoly h = x_poly();
  for (int i = 1; i <= n / 2; ++i) {
    h = frobenius(f, h, m);
    if (degree(gcd(f, m, sub(f, h, x_poly()))) > 0) return false;
  }
  return true;
}

std::vector<std::pair<FqPoly, int>> squarefree_decomposition(const FiniteField& f, const FqPoly& a_in) {
  std::vector<std::pair<FqPoly, int>> out;
  FqPoly a = monic(f, a_in);
  if (degree(a) < 1) return out;
  FqPoly c = gcd(f, a, derivative(f, a));
  FqPoly w = div_exact(f, a, c);
  int i = 1;
  while (degree(w) > 0) {
    FqPoly y = gcd(f, w, c);
    FqPoly z = div_exact(f, w, y);
    if (degree(z) > 0) out.emplace_back(z, i);
    ++i;
    w = y;
    c = div_exact(f, c, y);
  }
  if (degree(c) > 0) {
    const int p = static_cast<int>(f.characteristic());
    for (auto& [g, j] : squarefree_decomposition(f, pth_root(f, c))) out.emplace_back(g, j * p);
  }
  return out;
}

bool less(const FqPoly& a, const FqPoly& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

std::vector<std::pair<FqPoly, int>> factor(const FiniteField& f, const FqPoly& a, Elem* lead_out) {
  FqPoly t = a;
  trim(t);
  if (t.empty()) fail(ErrorCode::ZeroArgument, "factorization of zero");
  if (lead_out) *lead_out = t.back();
  std::vector<std::pair<FqPoly, int>> out;
  for (const auto& [g, mult] : squarefree_decomposition(f, t)) {
    for (auto& h : factor_squarefree(f, g)) out.emplace_back(std::move(h), mult);
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return less(x.first, y.first); });
  // Factors of distinct squarefree parts are coprime, but equal factors
  // can appear when the input had p-th power parts; merge them.
  std::vector<std::pair<FqPoly, int>> merged;
  for (auto& e : out) {
    if (!merged.empty() && merged.back().first == e.first) merged.back().second += e.second;
    else merged.push_back(std::move(e));
  }
  return merged;
}

FqPoly squarefree_kernel(const FiniteField& f, const FqPoly& a) {
  FqPoly r{1};
  for (const auto& [g, mult] : squarefree_decomposition(f, a)) {
    if (mult % 2 == 1) r = mul(f, r, g);
  }
  return r;
}

Elem resultant(const FiniteField& f, const FqPoly& p_in, const FqPoly& u_in) {
  FqPoly a = p_in, b = u_in;
  trim(a);
  trim(b);
  Elem acc = 1;
  while (true) {
    if (b.empty()) return 0;
    const int m = degree(a);
    const int n = degree(b);
    if (n == 0) return f.mul(acc, f.pow(b[0], static_cast<std::uint64_t>(m)));
    if (m == 0) return f.mul(acc, f.pow(a[0], static_cast<std::uint64_t>(n)));
    FqPoly r = mod(f, a, b);
    if (r.empty()) return 0;
    if ((static_cast<long long>(m) * n) % 2 == 1) acc = f.neg(acc);
    acc = f.mul(acc, f.pow(b.back(), static_cast<std::uint64_t>(m - degree(r))));
    a = std::move(b);
    b = std::move(r);
  }
}

bool is_square_mod(const FiniteField& f, const FqPoly& a, const FqPoly& p) {
  FqPoly r = mod(f, a, p);
  if (r.empty()) return true;
  return f.is_square(resultant(f, p, r));
}

std::optional<FqPoly> sqrt_mod(const FiniteField& f, const FqPoly& a, const FqPoly& p, std::mt19937_64& rng) {
  FqPoly x = mod(f, a, p);
  if (x.empty()) return FqPoly{};
  if (!is_square_mod(f, x, p)) return std::nullopt;
  if (degree(p) == 1) {
    auto s = f.sqrt(x[0]);
    return constant(*s);
  }
  const BigInt order = field_size_power(f, static_cast<std::size_t>(degree(p)));
  BigInt t = order - 1;
  unsigned s = 0;
  while ((t & 1) == 0) {
    t >>= 1;
    ++s;
  }
  FqPoly z;
  do {
    z = random_poly(f, static_cast<std::size_t>(degree(p) - 1), rng);
  } while (z.empty() || is_square_mod(f, z, p));
  FqPoly c = powmod(f, z, t, p);
  FqPoly r = powmod(f, x, (t + 1) / 2, p);
  FqPoly b = powmod(f, x, t, p);
  unsigned m = s;
  const FqPoly one{1};
  while (b != one) {
    unsigned i = 0;
    FqPoly bb = b;
    while (bb != one) {
      bb = mulmod(f, bb, bb, p);
      ++i;
    }
    FqPoly w = c;
    for (unsigned j = 0; j + 1 < m - i; ++j) w = mulmod(f, w, w, p);
    r = mulmod(f, r, w, p);
    c = mulmod(f, w, w, p);
    b = mulmod(f, b, c, p);
    m = i;
  }
  return r;
}

std::optional<FqPoly> sqrt_exact(const FiniteField& f, const FqPoly& a_in) {
  FqPoly a = a_in;
  trim(a);
  if (a.empty()) return FqPoly{};
  const int n = degree(a);
  if (n % 2 != 0) return std::nullopt;
  auto lc = f.sqrt(a.back());
  if (!lc) return std::nullopt;
  const int m = n / 2;
  FqPoly s(static_cast<std::size_t>(m) + 1, 0);
  s[m] = *lc;
  const Elem inv2lc = f.inv(f.add(*lc, *lc));
  for (int k = 1; k <= m; ++k) {
    Elem acc = a[2 * m - k];
    for (int i = m - k + 1; i <= m - 1; ++i) {
      const int j = 2 * m - k - i;
      if (j <= m - k || j > m - 1) continue;
      acc = f.sub(acc, f.mul(s[i], s[j]));
    }
    s[m - k] = f.mul(acc, inv2lc);
  }
  if (mul(f, s, s) != a) return std::nullopt;
  return s;
}

FqPoly random_poly(const FiniteField& f, std::size_t max_degree, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> dist(0, f.order() - 1);
  FqPoly r(max_degree + 1);
  for (auto& c : r) c = static_cast<Elem>(dist(rng));
  trim(r);
  return r;
}

}  // namespace qfl::fq
