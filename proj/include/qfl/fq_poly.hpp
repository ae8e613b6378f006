#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qfl/finite_field.hpp"

namespace qfl {

// Dense univariate polynomials over a finite field, constant term first,
// without trailing zeros (the zero polynomial is empty).  These back the
// global computations over GF(q)(X): places, local residues, and the
// isotropic-vector solver.
using FqPoly = std::vector<FiniteField::Elem>;
using BigInt = boost::multiprecision::cpp_int;

namespace fq {

void trim(FqPoly& a);
int degree(const FqPoly& a);  // -1 for zero
FqPoly constant(FiniteField::Elem c);
FqPoly monomial(const FiniteField& f, FiniteField::Elem c, std::size_t k);
FqPoly x_poly();

FqPoly add(const FiniteField& f, const FqPoly& a, const FqPoly& b);
FqPoly sub(const FiniteField& f, const FqPoly& a, const FqPoly& b);
FqPoly neg(const FiniteField& f, const FqPoly& a);
FqPoly mul(const FiniteField& f, const FqPoly& a, const FqPoly& b);
FqPoly scale(const FiniteField& f, const FqPoly& a, FiniteField::Elem c);
FqPoly shift(const FqPoly& a, std::size_t k);
void divmod(const FiniteField& f, const FqPoly& a, const FqPoly& b, FqPoly* q, FqPoly* r);
FqPoly div_exact(const FiniteField& f, const FqPoly& a, const FqPoly& b);
FqPoly mod(const FiniteField& f, const FqPoly& a, const FqPoly& m);
FqPoly monic(const FiniteField& f, const FqPoly& a);
FiniteField::Elem lead(const FqPoly& a);
FqPoly gcd(const FiniteField& f, const FqPoly& a, const FqPoly& b);
// Returns g = gcd(a, b) (monic) and s, t with s a + t b = g.
FqPoly xgcd(const FiniteField& f, const FqPoly& a, const FqPoly& b, FqPoly* s, FqPoly* t);
FqPoly derivative(const FiniteField& f, const FqPoly& a);
FiniteField::Elem eval(const FiniteField& f, const FqPoly& a, FiniteField::Elem x);
// Coefficients reversed to degree n: X^n a(1/X).
FqPoly reverse(const FqPoly& a, std::size_t n);

// Arithmetic in GF(q)[X]/(m).
FqPoly mulmod(const FiniteField& f, const FqPoly& a, const FqPoly& b, const FqPoly& m);
FqPoly powmod(const FiniteField& f, const FqPoly& a, const BigInt& e, const FqPoly& m);
std::optional<FqPoly> invmod(const FiniteField& f, const FqPoly& a, const FqPoly& m);

// q^n as a big integer.
BigInt field_size_power(const FiniteField& f, std::size_t n);

// The multiplicity of the monic irreducible p in a (a != 0), and a / p^k.
int multiplicity(const FiniteField& f, const FqPoly& a, const FqPoly& p, FqPoly* cofactor);

bool is_irreducible(const FiniteField& f, const FqPoly& a);
// Squarefree decomposition of a monic polynomial: pairs (g_i, i) with
// a = prod g_i^i and the g_i squarefree and pairwise coprime.
std::vector<std::pair<FqPoly, int>> squarefree_decomposition(const FiniteField& f, const FqPoly& a);
// Full factorization of a nonzero polynomial into monic irreducibles with
// multiplicities, sorted by (degree, coefficients).  The leading
// coefficient is returned separately through `lead_out` when requested.
std::vector<std::pair<FqPoly, int>> factor(const FiniteField& f, const FqPoly& a, FiniteField::Elem* lead_out = nullptr);

// Product of the irreducible factors of odd multiplicity (monic).
FqPoly squarefree_kernel(const FiniteField& f, const FqPoly& a);

// Resultant of a monic p with u; for irreducible p this is the norm of
// u mod p from GF(q)[X]/(p) down to GF(q).
FiniteField::Elem resultant(const FiniteField& f, const FqPoly& p, const FqPoly& u);

// Square test and square root in the field GF(q)[X]/(p), p monic irreducible.
bool is_square_mod(const FiniteField& f, const FqPoly& a, const FqPoly& p);
std::optional<FqPoly> sqrt_mod(const FiniteField& f, const FqPoly& a, const FqPoly& p, std::mt19937_64& rng);

// Exact square root of a polynomial, if it is a square in GF(q)[X].
std::optional<FqPoly> sqrt_exact(const FiniteField& f, const FqPoly& a);

FqPoly random_poly(const FiniteField& f, std::size_t max_degree, std::mt19937_64& rng);

bool less(const FqPoly& a, const FqPoly& b);

}  // namespace fq
}  // namespace qfl
