#pragma once

#include <string>
#include <vector>

#include "qfl/tower.hpp"

namespace qfl {

class QuadraticForm;
class GramForm;
struct QuadraticPfisterSymbol;
struct BilinearPfisterSymbol;

// field   := "GF(" int ")" level*
// level   := "((" sym "))" | "(" sym ")"
const FieldTower* parse_field(const std::string& text);

// expr    := term (("+" | "-") term)*
// term    := unary (("*" | "/") unary)*
// unary   := ("-" | "+") unary | power
// power   := atom ("^" ["-"] int | "^(" ["-"] int ")")?
// atom    := int | sym | "gen" | "(" expr ")"
// `gen` is the generator of GF(p^k) over GF(p) (k > 1 only).
Element parse_element(const FieldTower* tower, const std::string& text);

// "diag[e1, e2, ...]" or "gram[[g11, g12], [g21, g22]]" (the latter is
// diagonalized).
QuadraticForm parse_form(const FieldTower* tower, const std::string& text);
GramForm parse_gram(const FieldTower* tower, const std::string& text);

// "<<a1, ..., ad-1; b]]".  Without ';' the last entry is b, so "<<b]]" and
// "<<X, 1]]" are accepted as well.
QuadraticPfisterSymbol parse_quadratic_symbol(const FieldTower* tower, const std::string& text);
// "<<a1, ..., ad>>"
BilinearPfisterSymbol parse_bilinear_symbol(const FieldTower* tower, const std::string& text);

std::string format_form(const QuadraticForm& q);
std::string format_symbol(const QuadraticPfisterSymbol& s);
std::string format_symbol(const BilinearPfisterSymbol& s);

}  // namespace qfl
