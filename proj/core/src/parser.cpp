#include <cctype>

#include "srcartan/errors.hpp"
#include "srcartan/symexpr.hpp"

namespace srcartan::sym {

namespace {

class Parser {
 public:
  Parser(std::string_view src, const Chart& chart, const Bindings& bindings)
      : src_(src), chart_(chart), bindings_(bindings) {}

  Expr parse_all() {
    skip_space();
    if (pos_ == src_.size()) throw ParseError("empty expression", pos_);
    Expr e = expr();
    skip_space();
    if (pos_ != src_.size()) {
      throw ParseError(std::string("unexpected '") + src_[pos_] + "'", pos_);
    }
    return e;
  }

 private:
  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= src_.size()) throw ParseError(std::string("expected '") + c + "'", pos_);
      throw ParseError(std::string("expected '") + c + "' but found '" + src_[pos_] + "'", pos_);
    }
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = lhs + term();
      } else if (accept('-')) {
        lhs = lhs - term();
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = lhs * unary();
      } else if (accept('/')) {
        lhs = lhs / unary();
      } else {
        return lhs;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (accept('^')) return pow(base, exponent());
    return base;
  }

  int exponent() {
    skip_space();
    const bool paren = accept('(');
    skip_space();
    bool negative = false;
    if (accept('-')) {
      negative = true;
    } else {
      accept('+');
    }
    skip_space();
    const std::size_t start = pos_;
    long value = 0;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
      value = value * 10 + (src_[pos_] - '0');
      if (value > 1000) throw ParseError("exponent too large", start);
      ++pos_;
    }
    if (pos_ == start) throw ParseError("expected integer exponent", pos_);
    if (paren) expect(')');
    return static_cast<int>(negative ? -value : value);
  }

  Expr atom() {
    skip_space();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  Expr number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        pos_ = look;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    try {
      return Expr(parse_rational(src_.substr(start, pos_ - start)));
    } catch (const ParseError& e) {
      throw ParseError("malformed number", start);
    }
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = src_.substr(start, pos_ - start);
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == '(') {
      Expr (*fn)(const Expr&) = nullptr;
      if (name == "sqrt") fn = &sqrt;
      if (name == "sin") fn = &sin;
      if (name == "cos") fn = &cos;
      if (name == "exp") fn = &exp;
      if (fn == nullptr) throw ParseError("unknown function '" + std::string(name) + "'", start);
      ++pos_;
      Expr arg = expr();
      expect(')');
      return fn(arg);
    }
    if (auto idx = chart_.index_of(name)) return Expr::variable(*idx);
    if (auto it = bindings_.find(name); it != bindings_.end()) return Expr(it->second);
    throw ParseError("unknown identifier '" + std::string(name) + "'", start);
  }

  std::string_view src_;
  const Chart& chart_;
  const Bindings& bindings_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view src, const Chart& chart, const Bindings& bindings) {
  return Parser(src, chart, bindings).parse_all();
}

// Accepts [+-]digits[.digits][e[+-]digits] and p/q with integer p, q.
Rational parse_rational(std::string_view text) {
  std::size_t pos = 0;
  auto fail = [&]() -> Rational {
    throw ParseError("malformed rational '" + std::string(text) + "'", pos);
  };
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) negative = text[pos++] == '-';

  std::string digits;
  long scale = 0;
  bool any = false;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    digits += text[pos++];
    any = true;
  }
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      digits += text[pos++];
      --scale;
      any = true;
    }
  }
  if (!any) return fail();
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    bool eneg = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) eneg = text[pos++] == '-';
    long e = 0;
    bool eany = false;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      e = e * 10 + (text[pos++] - '0');
      if (e > 4000) return fail();
      eany = true;
    }
    if (!eany) return fail();
    scale += eneg ? -e : e;
  }
  Rational value(mpz_class(digits, 10));
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(scale)));
  if (scale >= 0) {
    value *= ten_pow;
  } else {
    value /= ten_pow;
  }
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos < text.size() && text[pos] == '/') {
    if (scale != 0) return fail();  // integer numerators only
    ++pos;
    std::string den;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      den += text[pos++];
    }
    if (den.empty()) return fail();
    mpz_class d(den, 10);
    if (d == 0) return fail();
    value /= d;
  }
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos != text.size()) return fail();
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

}  // namespace srcartan::sym
