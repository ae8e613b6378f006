#include "qfl/finite_field.hpp"

#include <map>
#include <mutex>

#include "qfl/errors.hpp"

namespace qfl {

namespace {

constexpr std::uint64_t kTableLimit = 1u << 20;
constexpr std::uint64_t kOrderLimit = 1u << 31;

using PrimePoly = std::vector<std::uint32_t>;

void trim(PrimePoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  std::int64_t t = 0, nt = 1, r = p, nr = a;
  while (nr != 0) {
    std::int64_t q = r / nr;
    t -= q * nt;
    std::swap(t, nt);
    r -= q * nr;
    std::swap(r, nr);
  }
  return static_cast<std::uint32_t>((t % p + p) % p);
}

PrimePoly mod_poly(PrimePoly a, const PrimePoly& m, std::uint32_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const std::uint32_t lead_inv = inv_mod(m.back(), p);
  while (a.size() > dm) {
    const std::uint64_t c = static_cast<std::uint64_t>(a.back()) * lead_inv % p;
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) {
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - c * m[i] % p) % p);
    }
    trim(a);
  }
  return a;
}

PrimePoly mulmod_poly(const PrimePoly& a, const PrimePoly& b, const PrimePoly& m, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  PrimePoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      r[i + j] = static_cast<std::uint32_t>((r[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % p);
    }
  }
  return mod_poly(std::move(r), m, p);
}

PrimePoly gcd_poly(PrimePoly a, PrimePoly b, std::uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    a = mod_poly(std::move(a), b, p);
    std::swap(a, b);
  }
  return a;
}

// x^(p^e) mod m by repeated p-th powering.
PrimePoly frobenius_power(const PrimePoly& m, std::uint32_t p, std::uint32_t e) {
  PrimePoly x = mod_poly({0, 1}, m, p);
  for (std::uint32_t round = 0; round < e; ++round) {
    PrimePoly result{1};
    PrimePoly base = x;
    std::uint32_t n = p;
    while (n > 0) {
      if (n & 1) result = mulmod_poly(result, base, m, p);
      base = mulmod_poly(base, base, m, p);
      n >>= 1;
    }
    x = std::move(result);
  }
  return x;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// Rabin's irreducibility test for a monic polynomial of degree k over GF(p).
bool is_irreducible_prime(const PrimePoly& f, std::uint32_t p) {
  const auto k = static_cast<std::uint32_t>(f.size() - 1);
  if (k == 1) return true;
  PrimePoly xq = frobenius_power(f, p, k);
  PrimePoly diff = xq;
  if (diff.size() < 2) diff.resize(2, 0);
  diff[1] = (diff[1] + p - 1) % p;
  trim(diff);
  if (!diff.empty()) return false;
  for (std::uint64_t r : prime_factors(k)) {
    PrimePoly h = frobenius_power(f, p, static_cast<std::uint32_t>(k / r));
    if (h.size() < 2) h.resize(2, 0);
    h[1] = (h[1] + p - 1) % p;
    trim(h);
    PrimePoly g = gcd_poly(f, h, p);
    if (g.size() != 1) return false;
  }
  return true;
}

PrimePoly smallest_irreducible(std::uint32_t p, std::uint32_t k) {
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < k; ++i) count *= p;
  for (std::uint64_t code = 0; code < count; ++code) {
    PrimePoly f(k + 1, 0);
    std::uint64_t c = code;
    for (std::uint32_t i = 0; i < k; ++i) {
      f[i] = static_cast<std::uint32_t>(c % p);
      c /= p;
    }
    f[k] = 1;
    if (k > 1 && f[0] == 0) continue;
    if (is_irreducible_prime(f, p)) return f;
  }
  fail(ErrorCode::Internal, "no irreducible polynomial found");
}

}  // namespace

bool FiniteField::is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::optional<std::pair<std::uint32_t, std::uint32_t>> FiniteField::split_prime_power(std::uint64_t q) {
  if (q < 2) return std::nullopt;
  std::uint64_t p = 0;
  for (std::uint64_t d = 2; d * d <= q; ++d) {
    if (q % d == 0) {
      p = d;
      break;
    }
  }
  if (p == 0) p = q;
  std::uint32_t k = 0;
  while (q % p == 0) {
    q /= p;
    ++k;
  }
  if (q != 1) return std::nullopt;
  return std::make_pair(static_cast<std::uint32_t>(p), k);
}

std::shared_ptr<const FiniteField> FiniteField::get(std::uint32_t p, std::uint32_t k) {
  static std::mutex mutex;
  static std::map<std::pair<std::uint32_t, std::uint32_t>, std::shared_ptr<const FiniteField>> cache;
  if (p == 2) fail(ErrorCode::InvalidArgument, "characteristic 2 is not supported");
  if (!is_prime(p)) fail(ErrorCode::InvalidArgument, std::to_string(p) + " is not prime");
  if (k == 0) fail(ErrorCode::InvalidArgument, "field degree must be positive");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < k; ++i) {
    q *= p;
    if (q >= kOrderLimit) fail(ErrorCode::InvalidArgument, "field order exceeds 2^31");
  }
  std::lock_guard lock(mutex);
  auto& slot = cache[{p, k}];
  if (!slot) slot = std::shared_ptr<const FiniteField>(new FiniteField(p, k));
  return slot;
}

FiniteField::FiniteField(std::uint32_t p, std::uint32_t k) : p_(p), k_(k), q_(1) {
  for (std::uint32_t i = 0; i < k; ++i) q_ *= p;
  modulus_ = k == 1 ? PrimePoly{0, 1} : smallest_irreducible(p, k);

  if (q_ <= kTableLimit) {
    // Find a primitive element and build log tables.
    const auto factors = prime_factors(q_ - 1);
    Elem g = 0;
    for (Elem cand = 1; cand < q_; ++cand) {
      bool primitive = true;
      for (std::uint64_t r : factors) {
        if (pow_slow(cand, (q_ - 1) / r) == 1) {
          primitive = false;
          break;
        }
      }
      if (primitive) {
        g = cand;
        break;
      }
    }
    exp_.resize(2 * (q_ - 1));
    log_.assign(q_, 0);
    Elem x = 1;
    for (std::uint64_t i = 0; i < q_ - 1; ++i) {
      exp_[i] = x;
      exp_[i + q_ - 1] = x;
      log_[x] = static_cast<std::uint32_t>(i);
      x = mul_poly(x, g);
    }
    tables_ = true;
  }
  for (Elem a = 1; a < q_; ++a) {
    if (!is_square(a)) {
      nonsquare_ = a;
      break;
    }
  }
}

FiniteField::Elem FiniteField::from_int(long long n) const {
  long long r = n % static_cast<long long>(p_);
  if (r < 0) r += p_;
  return static_cast<Elem>(r);
}

FiniteField::Elem FiniteField::generator() const { return k_ == 1 ? 0 : p_; }

std::vector<std::uint32_t> FiniteField::digits(Elem a) const {
  std::vector<std::uint32_t> d(k_, 0);
  for (std::uint32_t i = 0; i < k_; ++i) {
    d[i] = a % p_;
    a /= p_;
  }
  return d;
}

FiniteField::Elem FiniteField::from_digits(const std::vector<std::uint32_t>& d) const {
  std::uint64_t code = 0;
  for (std::size_t i = d.size(); i-- > 0;) {
    if (i >= k_) {
      if (d[i] % p_ != 0) fail(ErrorCode::InvalidArgument, "digit vector too long");
      continue;
    }
    code = code * p_ + d[i] % p_;
  }
  return static_cast<Elem>(code);
}

FiniteField::Elem FiniteField::add(Elem a, Elem b) const {
  if (k_ == 1) return (a + b) % p_;
  Elem out = 0;
  Elem scale = 1;
  for (std::uint32_t i = 0; i < k_; ++i) {
    out += ((a % p_ + b % p_) % p_) * scale;
    a /= p_;
    b /= p_;
    scale *= p_;
  }
  return out;
}

FiniteField::Elem FiniteField::neg(Elem a) const {
  if (k_ == 1) return a == 0 ? 0 : p_ - a;
  Elem out = 0;
  Elem scale = 1;
  for (std::uint32_t i = 0; i < k_; ++i) {
    out += ((p_ - a % p_) % p_) * scale;
    a /= p_;
    scale *= p_;
  }
  return out;
}

FiniteField::Elem FiniteField::sub(Elem a, Elem b) const { return add(a, neg(b)); }

FiniteField::Elem FiniteField::mul_poly(Elem a, Elem b) const {
  if (k_ == 1) return static_cast<Elem>(static_cast<std::uint64_t>(a) * b % p_);
  PrimePoly pa = digits(a), pb = digits(b);
  trim(pa);
  trim(pb);
  PrimePoly r = mulmod_poly(pa, pb, modulus_, p_);
  return from_digits(r);
}

FiniteField::Elem FiniteField::mul(Elem a, Elem b) const {
  if (a == 0 || b == 0) return 0;
  if (tables_) return exp_[log_[a] + log_[b]];
  return mul_poly(a, b);
}

FiniteField::Elem FiniteField::pow_slow(Elem a, std::uint64_t e) const {
  Elem result = 1;
  Elem base = a;
  while (e > 0) {
    if (e & 1) result = mul_poly(result, base);
    base = mul_poly(base, base);
    e >>= 1;
  }
  return result;
}

FiniteField::Elem FiniteField::pow(Elem a, std::uint64_t e) const {
  if (e == 0) return 1;
  if (a == 0) return 0;
  if (tables_) return exp_[static_cast<std::uint64_t>(log_[a]) * (e % (q_ - 1)) % (q_ - 1)];
  return pow_slow(a, e);
}

FiniteField::Elem FiniteField::inv(Elem a) const {
  if (a == 0) fail(ErrorCode::DivisionByZero, "inverse of zero in GF(" + std::to_string(q_) + ")");
  if (tables_) return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
  return pow_slow(a, q_ - 2);
}

bool FiniteField::is_square(Elem a) const {
  if (a == 0) return true;
  if (tables_) return log_[a] % 2 == 0;
  return pow_slow(a, (q_ - 1) / 2) == 1;
}

std::optional<FiniteField::Elem> FiniteField::sqrt(Elem a) const {
  if (a == 0) return Elem{0};
  if (!is_square(a)) return std::nullopt;
  if (tables_) return exp_[log_[a] / 2];
  // Tonelli-Shanks.
  std::uint64_t s = 0, t = q_ - 1;
  while (t % 2 == 0) {
    t /= 2;
    ++s;
  }
  Elem z = nonsquare_;
  Elem c = pow_slow(z, t);
  Elem x = pow_slow(a, (t + 1) / 2);
  Elem b = pow_slow(a, t);
  std::uint64_t m = s;
  while (b != 1) {
    std::uint64_t i = 0;
    Elem bb = b;
    while (bb != 1) {
      bb = mul_poly(bb, bb);
      ++i;
    }
    Elem w = c;
    for (std::uint64_t j = 0; j + 1 < m - i; ++j) w = mul_poly(w, w);
    x = mul_poly(x, w);
    c = mul_poly(w, w);
    b = mul_poly(b, c);
    m = i;
  }
  return x;
}

std::string FiniteField::to_string(Elem a) const {
  if (k_ == 1) return std::to_string(a);
  const auto d = digits(a);
  std::string out;
  for (std::uint32_t i = 0; i < k_; ++i) {
    if (d[i] == 0) continue;
    if (!out.empty()) out += "+";
    if (i == 0) {
      out += std::to_string(d[i]);
      continue;
    }
    if (d[i] != 1) out += std::to_string(d[i]) + "*";
    out += "gen";
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out.empty() ? "0" : out;
}

}  // namespace qfl
