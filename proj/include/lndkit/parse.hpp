#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "lndkit/errors.hpp"
#include "lndkit/polynomial.hpp"

namespace lndkit {

namespace detail {

// Recursive descent over:
//   expr    := term (('+' | '-') term)*
//   term    := unary ('*' unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' integer)?
//   primary := integer ('/' integer)? | name | '(' expr ')'
// Juxtaposition ("2X", "X Y", "X(Y)") is rejected.
class PolyParser {
 public:
  PolyParser(std::string_view text, const VarContext& ctx, std::size_t line, std::size_t col0)
      : text_(text), ctx_(ctx), line_(line), col0_(col0) {}

  Polynomial parse() {
    skip_ws();
    if (pos_ >= text_.size()) fail("empty polynomial");
    Polynomial p = expr();
    skip_ws();
    if (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '(')
        fail("implicit multiplication is not accepted; use '*'");
      fail(std::string("unexpected character '") + c + "'");
    }
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col0_ + pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial expr() {
    Polynomial acc = term();
    for (;;) {
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  Polynomial term() {
    Polynomial acc = unary();
    while (accept('*')) acc *= unary();
    return acc;
  }

  Polynomial unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Polynomial power() {
    Polynomial base = primary();
    if (accept('^')) {
      skip_ws();
      std::string digits = read_digits();
      if (digits.empty()) fail("exponent must be a non-negative integer");
      if (digits.size() > 6) fail("exponent too large");
      base = base.pow(std::stoul(digits));
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '^') fail("chained exponents are ambiguous; use parentheses");
    }
    return base;
  }

  Polynomial primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num = read_digits();
      std::string den = "1";
      std::size_t save = pos_;
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '/') {
        ++pos_;
        skip_ws();
        den = read_digits();
        if (den.empty()) fail("expected denominator after '/'");
        if (Integer(den) == 0) fail("zero denominator");
      } else {
        pos_ = save;
      }
      return Polynomial::constant(ctx_, make_rational(Integer(num), Integer(den)));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      auto idx = ctx_.index_of(name);
      if (!idx) {
        pos_ = start;
        fail("unknown variable " + name);
      }
      return Polynomial::variable(ctx_, *idx);
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string read_digits() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string_view text_;
  const VarContext& ctx_;
  std::size_t line_;
  std::size_t col0_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a polynomial in the text grammar. line/column locate the text
/// inside a larger document for diagnostics.
inline Polynomial parse_polynomial(std::string_view text, const VarContext& ctx, std::size_t line = 1,
                                   std::size_t column = 1) {
  return detail::PolyParser(text, ctx, line, column).parse();
}

}  // namespace lndkit
