#include <functional>

#include "doctest.h"
#include "qfl/dsl.hpp"
#include "qfl/errors.hpp"
#include "qfl/fields.hpp"
#include "qfl/linkage.hpp"

using namespace qfl;

namespace {

std::size_t parse_error_position(const std::function<void()>& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e.position();
  }
  return std::string::npos;
}

}  // namespace

TEST_CASE("fields") {
  const FieldTower* t = parse_field("GF(3)((t))((u))");
  CHECK(t->to_string() == "GF(3)((t))((u))");
  CHECK(t->depth() == 2);
  CHECK(parse_field(" GF( 9 ) (X) ") == parse_field("GF(9)(X)"));
  CHECK(parse_field("GF(5)((t))")->outer_is_laurent());
  CHECK_THROWS_AS(parse_field("GF(4)"), Error);
  CHECK_THROWS_AS(parse_field("GF(6)"), Error);
  CHECK_THROWS_AS(parse_field("GF(3)((t))((t))"), Error);
  CHECK(parse_error_position([] { parse_field("GF(3)((t)"); }) == 8);
  CHECK(parse_error_position([] { parse_field("GF3"); }) == 0);
}

TEST_CASE("elements") {
  const FieldTower* t = parse_field("GF(5)((t))");
  CHECK(parse_element(t, "7") == parse_element(t, "2"));
  CHECK(parse_element(t, "-t^-2 * t^2") == parse_element(t, "4"));
  CHECK(parse_element(t, "(1+t)^2") == parse_element(t, "1 + 2*t + t^2"));
  CHECK(parse_element(t, "t^(-1)") == parse_element(t, "1/t"));
  const FieldTower* f9 = parse_field("GF(9)");
  CHECK(parse_element(f9, "gen^8") == parse_element(f9, "1"));
  CHECK_FALSE(parse_element(f9, "gen^3") == parse_element(f9, "gen"));
  CHECK_THROWS_AS(parse_element(FieldTower::finite(3), "gen"), ParseError);
  CHECK(parse_error_position([&] { parse_element(t, "1 + s"); }) == 4);
  CHECK(parse_error_position([&] { parse_element(t, "1/(t-t)"); }) != std::string::npos);
  CHECK(parse_error_position([&] { parse_element(t, "1 +"); }) == 3);
  CHECK(parse_error_position([&] { parse_element(t, "t)"); }) == 1);
}

TEST_CASE("forms and symbols") {
  const FieldTower* t = parse_field("GF(3)((t))");
  CHECK(parse_form(t, "diag[1, -2, t, -2*t]").dim() == 4);
  CHECK(parse_form(t, "gram[[0,1],[1,0]]").dim() == 2);
  CHECK_THROWS_AS(parse_form(t, "diag[1, 0]"), ParseError);
  CHECK(parse_form(t, "diag[]").dim() == 0);
  CHECK_THROWS_AS(parse_form(t, "gram[[1,1],[1]]"), Error);
  const QuadraticPfisterSymbol s = parse_quadratic_symbol(t, "<<t, 2; 1]]");
  CHECK(s.fold() == 3);
  CHECK(s.slots.size() == 2);
  CHECK(parse_quadratic_symbol(t, "<<t, 1]]") == parse_quadratic_symbol(t, "<<t; 1]]"));
  CHECK(parse_quadratic_symbol(t, "<<1]]").fold() == 1);
  CHECK(parse_bilinear_symbol(t, "<<t, 2>>").fold() == 2);
  CHECK_THROWS_AS(parse_quadratic_symbol(t, "<<t; 1>>"), ParseError);
  CHECK_THROWS_AS(parse_quadratic_symbol(t, "<<t; 2]]"), Error);  // 1 + 4*2 = 0 in GF(3)
}

TEST_CASE("printing round trip") {
  for (const char* field : {"GF(3)", "GF(9)", "GF(5)((t))", "GF(3)((t))((u))", "GF(3)(X)", "GF(7)((s))(Y)"}) {
    const FieldTower* k = parse_field(field);
    Rng rng(8);
    for (int i = 0; i < 30; ++i) {
      const Element x = sample(k, SampleBudget{}, rng);
      CHECK(parse_element(k, x.to_string()) == x);
      const auto s = sample_symbol(k, 1 + static_cast<int>(rng() % 3), rng);
      CHECK(parse_quadratic_symbol(k, format_symbol(s)) == s);
      const QuadraticForm q = expand(s);
      CHECK(parse_form(k, format_form(q)) == q);
      std::vector<Element> slots(s.slots);
      slots.push_back(x);
      const BilinearPfisterSymbol b(k, slots);
      CHECK(parse_bilinear_symbol(k, format_symbol(b)) == b);
    }
  }
  const FieldTower* t = parse_field("GF(3)((t))");
  CHECK(format_symbol(parse_quadratic_symbol(t, "<<1]]")) == "<<1]]");
  CHECK(format_symbol(parse_quadratic_symbol(t, "<<t,2;1]]")) == "<<t, 2; 1]]");
  CHECK(format_form(parse_form(t, "diag[1,-2]")) == "diag[1, 1]");
}
