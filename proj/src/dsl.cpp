#include "qfl/dsl.hpp"

#include <cctype>

#include "qfl/errors.hpp"
#include "qfl/pfister.hpp"
#include "qfl/qforms.hpp"

namespace qfl {

namespace {

class Reader {
 public:
  Reader(const std::string& text, const FieldTower* tower) : s_(text), t_(tower) {}

  void ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(const std::string& tok) {
    ws();
    return s_.compare(pos_, tok.size(), tok) == 0;
  }
  bool accept(const std::string& tok) {
    if (!peek(tok)) return false;
    pos_ += tok.size();
    return true;
  }
  void expect(const std::string& tok) {
    if (!accept(tok)) error("'" + tok + "'");
  }
  [[noreturn]] void error(const std::string& expected) { throw ParseError(pos_, expected, s_); }
  void finish() {
    ws();
    if (pos_ != s_.size()) error("end of input");
  }

  std::uint64_t integer() {
    ws();
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) error("an integer");
    std::uint64_t v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      if (v > (std::uint64_t{1} << 40)) error("a smaller integer");
      v = v * 10 + static_cast<std::uint64_t>(s_[pos_++] - '0');
    }
    return v;
  }

  std::string identifier() {
    ws();
    const std::size_t start = pos_;
    if (pos_ >= s_.size() || !(std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      error("a symbol");
    }
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    return s_.substr(start, pos_ - start);
  }

  const FieldTower* field() {
    expect("GF(");
    const std::size_t at = pos_;
    const std::uint64_t q = integer();
    const auto pk = FiniteField::split_prime_power(q);
    if (!pk) {
      pos_ = at;
      error("a prime power");
    }
    expect(")");
    std::vector<LevelDescriptor> levels;
    while (true) {
      if (accept("((")) {
        levels.push_back({identifier(), LevelKind::LaurentSeries});
        expect("))");
      } else if (accept("(")) {
        levels.push_back({identifier(), LevelKind::RationalFunction});
        expect(")");
      } else {
        break;
      }
    }
    finish();
    return FieldTower::make(pk->first, pk->second, levels);
  }

  Element expr() {
    Element acc = term();
    while (true) {
      if (accept("+")) acc += term();
      else if (accept("-")) acc -= term();
      else return acc;
    }
  }

  Element term() {
    Element acc = unary();
    while (true) {
      if (accept("*")) {
        acc *= unary();
      } else if (peek("/")) {
        const std::size_t at = pos_;
        ++pos_;
        const Element d = unary();
        if (d.is_zero()) {
          pos_ = at;
          error("a nonzero divisor");
        }
        acc /= d;
      } else {
        return acc;
      }
    }
  }

  Element unary() {
    if (accept("-")) return -unary();
    if (accept("+")) return unary();
    return power();
  }

  Element power() {
    Element base = atom();
    if (!accept("^")) return base;
    const bool paren = accept("(");
    const bool negative = accept("-");
    const long long e = static_cast<long long>(integer());
    if (paren) expect(")");
    if (negative && base.is_zero()) error("a nonzero base for a negative exponent");
    return base.pow(negative ? -e : e);
  }

  Element atom() {
    ws();
    if (pos_ >= s_.size()) error("an element");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Element e = expr();
      expect(")");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::uint64_t v = integer();
      return Element::from_int(t_, static_cast<long long>(v % t_->base().characteristic()));
    }
    const std::size_t at = pos_;
    const std::string sym = identifier();
    if (sym == "gen") {
      if (t_->base().degree() == 1) {
        pos_ = at;
        error("a level symbol (gen needs GF(p^k) with k > 1)");
      }
      return Element::scalar(t_, t_->base().generator());
    }
    const auto level = t_->level_of(sym);
    if (!level) {
      pos_ = at;
      error("a level symbol of " + t_->to_string());
    }
    return Element::variable(t_, *level);
  }

  std::vector<Element> list(const std::string& close) {
    std::vector<Element> out;
    if (peek(close)) return out;
    out.push_back(expr());
    while (accept(",")) out.push_back(expr());
    return out;
  }

  GramForm gram_body() {
    expect("[");
    Matrix rows;
    if (!peek("]")) {
      do {
        expect("[");
        rows.push_back(list("]"));
        expect("]");
      } while (accept(","));
    }
    expect("]");
    for (const auto& r : rows) {
      if (r.size() != rows.size()) error("a square Gram matrix");
    }
    return GramForm(t_, rows);
  }

  std::size_t pos_ = 0;

 private:
  const std::string& s_;
  const FieldTower* t_;
};

}  // namespace

const FieldTower* parse_field(const std::string& text) {
  Reader r(text, nullptr);
  return r.field();
}

Element parse_element(const FieldTower* tower, const std::string& text) {
  Reader r(text, tower);
  Element e = r.expr();
  r.finish();
  return e;
}

GramForm parse_gram(const FieldTower* tower, const std::string& text) {
  Reader r(text, tower);
  r.expect("gram");
  GramForm g = r.gram_body();
  r.finish();
  return g;
}

QuadraticForm parse_form(const FieldTower* tower, const std::string& text) {
  Reader r(text, tower);
  if (r.accept("gram")) {
    GramForm g = r.gram_body();
    r.finish();
    return diagonalize(g).form;
  }
  r.expect("diag[");
  const std::size_t at = r.pos_;
  std::vector<Element> d = r.list("]");
  r.expect("]");
  r.finish();
  for (const auto& e : d) {
    if (e.is_zero()) {
      r.pos_ = at;
      r.error("nonzero diagonal entries");
    }
  }
  return QuadraticForm(tower, std::move(d));
}

QuadraticPfisterSymbol parse_quadratic_symbol(const FieldTower* tower, const std::string& text) {
  Reader r(text, tower);
  r.expect("<<");
  std::vector<Element> items = r.list(";");
  Element b;
  if (r.accept(";")) {
    b = r.expr();
  } else {
    if (items.empty()) r.error("a last slot");
    b = items.back();
    items.pop_back();
  }
  r.expect("]]");
  r.finish();
  return QuadraticPfisterSymbol(tower, std::move(items), b);
}

BilinearPfisterSymbol parse_bilinear_symbol(const FieldTower* tower, const std::string& text) {
  Reader r(text, tower);
  r.expect("<<");
  std::vector<Element> items = r.list(">>");
  r.expect(">>");
  r.finish();
  return BilinearPfisterSymbol(tower, std::move(items));
}

namespace {

std::string join(const std::vector<Element>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += v[i].to_string();
  }
  return out;
}

}  // namespace

std::string format_form(const QuadraticForm& q) { return "diag[" + join(q.diag()) + "]"; }

std::string format_symbol(const QuadraticPfisterSymbol& s) {
  if (s.slots.empty()) return "<<" + s.last.to_string() + "]]";
  return "<<" + join(s.slots) + "; " + s.last.to_string() + "]]";
}

std::string format_symbol(const BilinearPfisterSymbol& s) { return "<<" + join(s.slots) + ">>"; }

}  // namespace qfl
