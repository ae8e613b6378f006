#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qfl/pfister.hpp"

namespace qfl {

// q1 ≅ <<a1, a2, ..., a_{d-1}; b]] and q2 ≅ <<a1', a2, ..., a_{d-1}; b]].
struct LinkageCertificate {
  const FieldTower* tower = nullptr;
  std::vector<Element> shared;  // a2, ..., a_{d-1}
  Element last;                 // b
  Element left;                 // a1
  Element left_prime;           // a1'

  QuadraticPfisterSymbol first() const;
  QuadraticPfisterSymbol second() const;
};

// Witt index of expand(q1) ⊥ -expand(q2) is at least 2^(d-1).
bool is_linked_pair(const QuadraticPfisterSymbol& q1, const QuadraticPfisterSymbol& q2, int degree_cap = 12);

struct CertificateBudget {
  int candidates = 256;  // represented values tried per common slot
  int degree_cap = 12;
  std::uint64_t seed = 1;
};

struct CertificateSearch {
  enum class Status { Found, NotFound, BudgetExceeded };
  Status status = Status::NotFound;
  std::optional<LinkageCertificate> certificate;
};

// Needs fold d >= 2 (InvalidArgument otherwise).
CertificateSearch find_certificate(const QuadraticPfisterSymbol& q1, const QuadraticPfisterSymbol& q2,
                                   const CertificateBudget& budget = {});
// Both presentations are isometric to the given symbols and the slot
// product a1 ... a_{d-1} (1+4b) a1' is nonzero.
bool verify_certificate(const LinkageCertificate& c, const QuadraticPfisterSymbol& q1,
                        const QuadraticPfisterSymbol& q2, int degree_cap = 12);

struct VerificationReport {
  std::string theorem;
  std::string field;
  int d = 0;
  int n = 0;
  int m = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> failures;
  long long elapsed_ms = 0;
  // Extra counters (certificates found, budget exhaustions, ...).
  nlohmann::ordered_json details = nlohmann::ordered_json::object();

  bool passed() const { return failures.empty(); }
  nlohmann::ordered_json to_json() const;
};

struct VerifyOptions {
  int degree_cap = 12;
  bool timing = true;
  // Certificate search on linked pairs (GF(q)(X) runs).
  bool certificates = true;
};

// (d+1)-fold symbols expand isotropically and d-fold pairs are linked.
VerificationReport check_top_d_linked(const FieldTower* k, int d, std::size_t samples, std::uint64_t seed,
                                      const VerifyOptions& options = {});
// Residue map from (n+m)-fold symbols over k to n-fold symbols over the
// residue field of the m outer Laurent levels.
VerificationReport verify_residue_transfer(const FieldTower* k, int n, int m, std::size_t samples, std::uint64_t seed,
                                           const VerifyOptions& options = {});
// top-d-linked(residue field) agrees with top-(d+m)-linked(k).
VerificationReport verify_lifting_equivalence(const FieldTower* k, int d, int m, std::size_t samples,
                                              std::uint64_t seed, const VerifyOptions& options = {});
// GF(q)(X) is top-2-linked on samples, with witnesses and certificates.
VerificationReport verify_higher_local_d1(std::uint64_t q, std::size_t samples, std::uint64_t seed,
                                          const VerifyOptions& options = {});

// Sampled symbols as used by the harnesses.
QuadraticPfisterSymbol sample_symbol(const FieldTower* k, int fold, Rng& rng);

}  // namespace qfl
