#include "doctest.h"
#include "qfl/dsl.hpp"
#include "qfl/errors.hpp"
#include "qfl/fields.hpp"
#include "qfl/linkage.hpp"
#include "qfl/localglobal.hpp"

using namespace qfl;

namespace {

QuadraticPfisterSymbol qsym(const FieldTower* t, const std::string& s) { return parse_quadratic_symbol(t, s); }

VerifyOptions quiet() {
  VerifyOptions o;
  o.timing = false;
  return o;
}

}  // namespace

TEST_CASE("linked pairs") {
  const FieldTower* x3 = parse_field("GF(3)(X)");
  const FieldTower* f3 = FieldTower::finite(3);
  const FieldTower* l3 = parse_field("GF(3)((t))");
  CHECK(is_linked_pair(qsym(l3, "<<t; 1]]"), qsym(l3, "<<t; 1]]")));
  CHECK(is_linked_pair(qsym(x3, "<<X; 1]]"), qsym(x3, "<<X+1; 1]]")));
  CHECK(is_linked_pair(qsym(f3, "<<1]]"), qsym(f3, "<<0]]")));
  CHECK(is_linked_pair(qsym(x3, "<<X; 1]]"), qsym(x3, "<<2; 1]]")));
  CHECK_THROWS_AS(is_linked_pair(qsym(f3, "<<1]]"), qsym(l3, "<<1]]")), Error);
  CHECK_THROWS_AS(is_linked_pair(qsym(l3, "<<t; 1]]"), qsym(l3, "<<1]]")), Error);
  // (t, u) and (2, w) share no quaternion slot.
  const FieldTower* k = parse_field("GF(3)((t))((u))((w))");
  CHECK_FALSE(is_linked_pair(qsym(k, "<<t; (u-1)/4]]"), qsym(k, "<<w; 1]]")));
}

TEST_CASE("certificates") {
  const FieldTower* l3 = parse_field("GF(3)((t))");
  auto c = find_certificate(qsym(l3, "<<t; 1]]"), qsym(l3, "<<t; 1]]"));
  REQUIRE(c.status == CertificateSearch::Status::Found);
  CHECK(verify_certificate(*c.certificate, qsym(l3, "<<t; 1]]"), qsym(l3, "<<t; 1]]")));

  const FieldTower* x3 = parse_field("GF(3)(X)");
  const auto p1 = qsym(x3, "<<X; 1]]"), p2 = qsym(x3, "<<X+1; 1]]");
  c = find_certificate(p1, p2);
  REQUIRE(c.status == CertificateSearch::Status::Found);
  CHECK(verify_certificate(*c.certificate, p1, p2));
  LinkageCertificate direct{x3, {}, Element::one(x3), parse_element(x3, "X"), parse_element(x3, "X+1")};
  CHECK(verify_certificate(direct, p1, p2));
  LinkageCertificate swapped = direct;
  std::swap(swapped.left, swapped.left_prime);
  CHECK_FALSE(verify_certificate(swapped, p1, p2));

  CHECK_THROWS_AS(find_certificate(qsym(l3, "<<1]]"), qsym(l3, "<<1]]")), Error);
  const FieldTower* k = parse_field("GF(3)((t))((u))((w))");
  CHECK(find_certificate(qsym(k, "<<t; (u-1)/4]]"), qsym(k, "<<w; 1]]")).status ==
        CertificateSearch::Status::NotFound);
}

TEST_CASE("certificates on sampled linked pairs") {
  for (const char* field : {"GF(3)((t))", "GF(5)((t))", "GF(3)((t))((u))", "GF(3)(X)"}) {
    const FieldTower* t = parse_field(field);
    const int fold = t->outer_is_rational() ? 2 : static_cast<int>(t->depth()) + 1;
    Rng rng(13);
    int found = 0, linked = 0, mutated_rejected = 0, mutated = 0;
    for (int i = 0; i < 20; ++i) {
      const auto p1 = sample_symbol(t, fold, rng);
      const auto p2 = sample_symbol(t, fold, rng);
      if (!is_linked_pair(p1, p2)) continue;
      ++linked;
      const auto c = find_certificate(p1, p2);
      if (c.status != CertificateSearch::Status::Found) continue;
      ++found;
      CHECK(verify_certificate(*c.certificate, p1, p2));
      // The sum rule with I^(d+1) = 0: <<a1 a1', a2, ...; b]] is Witt
      // equivalent to q1 ⊥ q2.
      if (!t->outer_is_rational()) {
        LinkageCertificate sum = *c.certificate;
        sum.left = c.certificate->left * c.certificate->left_prime;
        const auto k1 = witt_decompose(expand(sum.first())).anisotropic_kernel;
        const auto k2 = witt_decompose(orthogonal_sum(expand(p1), expand(p2))).anisotropic_kernel;
        CHECK(isometric(k1, k2));
      }
      if (!is_isotropic(expand(p1))) {
        LinkageCertificate bad = *c.certificate;
        bad.left = Element::one(t);
        ++mutated;
        if (!verify_certificate(bad, p1, p2)) ++mutated_rejected;
      }
    }
    CHECK(found == linked);
    CHECK(mutated_rejected == mutated);
  }
}

TEST_CASE("top-linked harness") {
  auto r = check_top_d_linked(FieldTower::finite(3), 1, 30, 1, quiet());
  CHECK(r.passed());
  CHECK(r.theorem == "top-linked");
  CHECK(r.elapsed_ms == 0);
  CHECK(check_top_d_linked(FieldTower::finite(9), 1, 30, 1, quiet()).passed());
  CHECK(check_top_d_linked(parse_field("GF(3)((t))"), 2, 20, 2, quiet()).passed());
  // GF(3)((t)) is not top-1-linked: <<t]]-type 2-fold symbols are anisotropic.
  CHECK_FALSE(check_top_d_linked(parse_field("GF(3)((t))"), 1, 40, 3, quiet()).passed());
  CHECK_THROWS_AS(check_top_d_linked(FieldTower::finite(3), 0, 1, 1), Error);
  const auto j = r.to_json();
  CHECK(j.dump() == R"j({"theorem":"top-linked","field":"GF(3)","d":1,"n":0,"m":0,"samples":30,"seed":1,"failures":[],"elapsed_ms":0})j");
}

TEST_CASE("residue transfer harness") {
  auto r = verify_residue_transfer(parse_field("GF(3)((t))"), 1, 1, 30, 5, quiet());
  CHECK(r.passed());
  r = verify_residue_transfer(parse_field("GF(3)((t))((u))"), 1, 2, 15, 5, quiet());
  CHECK(r.passed());
  CHECK_THROWS_AS(verify_residue_transfer(parse_field("GF(3)((t))"), 2, 1, 1, 1), Error);
  CHECK_THROWS_AS(verify_residue_transfer(parse_field("GF(3)(X)"), 1, 1, 1, 1), Error);
  CHECK_THROWS_AS(verify_residue_transfer(parse_field("GF(3)((t))((u))"), 1, 1, 1, 1), Error);
}

TEST_CASE("lifting equivalence harness") {
  CHECK(verify_lifting_equivalence(parse_field("GF(5)((t))"), 1, 1, 20, 1, quiet()).passed());
  CHECK(verify_lifting_equivalence(parse_field("GF(3)((t))((u))"), 1, 2, 10, 1, quiet()).passed());
  CHECK(verify_lifting_equivalence(FieldTower::finite(7), 1, 0, 20, 1, quiet()).passed());
}

TEST_CASE("higher local harness") {
  const auto r = verify_higher_local_d1(3, 10, 42, quiet());
  CHECK(r.passed());
  CHECK(r.details["witnesses"] == 10);
  CHECK(r.field == "GF(3)(X)");
  const auto again = verify_higher_local_d1(3, 10, 42, quiet());
  CHECK(again.to_json() == r.to_json());
  CHECK_THROWS_AS(verify_higher_local_d1(6, 1, 1), Error);
}
