#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace qfl {

// GF(p^k) for an odd prime p.  Elements are encoded as integers in
// [0, p^k): the base-p digits of the code are the coefficients (constant
// term first) of the residue polynomial modulo the defining polynomial.
// Code 0 is zero and code 1 is one.
//
// The defining polynomial is the monic irreducible polynomial of degree k
// over GF(p) whose coefficient code sum(c_i p^i) is smallest.  Fields up to
// 2^20 elements carry discrete-log tables; larger ones fall back to
// polynomial arithmetic.
class FiniteField {
 public:
  using Elem = std::uint32_t;

  // Shared, cached instance.  Throws InvalidArgument for p = 2, non-prime p,
  // or p^k >= 2^31.
  static std::shared_ptr<const FiniteField> get(std::uint32_t p, std::uint32_t k);

  // Decomposes q = p^k; nullopt when q is not a prime power.
  static std::optional<std::pair<std::uint32_t, std::uint32_t>> split_prime_power(std::uint64_t q);
  static bool is_prime(std::uint64_t n);

  std::uint32_t characteristic() const { return p_; }
  std::uint32_t degree() const { return k_; }
  std::uint64_t order() const { return q_; }
  // Coefficients of the defining polynomial, constant term first, length k+1.
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem from_int(long long n) const;
  // The class of the polynomial variable (a field generator over GF(p)).
  Elem generator() const;

  Elem add(Elem a, Elem b) const;
  Elem sub(Elem a, Elem b) const;
  Elem neg(Elem a) const;
  Elem mul(Elem a, Elem b) const;
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, std::uint64_t e) const;

  bool is_square(Elem a) const;
  std::optional<Elem> sqrt(Elem a) const;
  // Smallest code that is a non-square.
  Elem nonsquare() const { return nonsquare_; }

  std::vector<std::uint32_t> digits(Elem a) const;
  Elem from_digits(const std::vector<std::uint32_t>& d) const;

  // "2", "gen", "1+2*gen^2"; the generator is spelled `gen`.
  std::string to_string(Elem a) const;

 private:
  FiniteField(std::uint32_t p, std::uint32_t k);

  Elem mul_poly(Elem a, Elem b) const;
  Elem pow_slow(Elem a, std::uint64_t e) const;

  std::uint32_t p_;
  std::uint32_t k_;
  std::uint64_t q_;
  std::vector<std::uint32_t> modulus_;
  bool tables_ = false;
  std::vector<std::uint32_t> exp_;  // exp_[i] = g^i, length 2(q-1)
  std::vector<std::uint32_t> log_;  // log_[a] for a != 0
  Elem nonsquare_ = 0;
};

using FiniteFieldPtr = std::shared_ptr<const FiniteField>;

}  // namespace qfl
