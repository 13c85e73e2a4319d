#include <cctype>
#include <cstdlib>

#include "ctrlgeo/expr.hpp"

namespace ctrlgeo::symexpr {

// Recursive descent over the grammar
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := atom ('^' exponent)?
//   atom   := number | ident | func '(' expr ')' | '(' expr ')' | '-' factor
//   exponent := number | '-' number | '(' '-'? number ('/' number)? ')'
// Identifiers are [a-zA-Z][a-zA-Z0-9_]*; applying a non-function identifier
// with call syntax is a parse error.

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  Expr run() {
    skip_ws();
    Expr e = parse_expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at offset " + std::to_string(pos_), pos_);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace((unsigned char)s_[pos_])) ++pos_;
  }

  bool peek_char(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  bool eat_char(char c) {
    if (peek_char(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr parse_expr() {
    Expr e = parse_term();
    for (;;) {
      if (eat_char('+')) {
        e = e + parse_term();
      } else if (eat_char('-')) {
        e = e - parse_term();
      } else {
        return e;
      }
    }
  }

  Expr parse_term() {
    Expr e = parse_factor();
    for (;;) {
      if (eat_char('*')) {
        e = e * parse_factor();
      } else if (eat_char('/')) {
        e = div(e, parse_factor());
      } else {
        return e;
      }
    }
  }

  Expr parse_factor() {
    Expr base = parse_atom();
    if (eat_char('^')) return pow(base, parse_exponent());
    return base;
  }

  Rational parse_exponent() {
    skip_ws();
    bool paren = eat_char('(');
    skip_ws();
    long long sign = 1;
    if (pos_ < s_.size() && s_[pos_] == '-') {
      sign = -1;
      ++pos_;
      skip_ws();
    }
    long long num = parse_plain_integer("exponent");
    long long den = 1;
    if (paren && eat_char('/')) {
      skip_ws();
      den = parse_plain_integer("exponent denominator");
      if (den == 0) fail("zero exponent denominator");
    }
    if (paren && !eat_char(')')) fail("expected ')' in exponent");
    return Rational(sign * num, den);
  }

  long long parse_plain_integer(const char* what) {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) ++pos_;
    if (pos_ == start) fail(std::string("expected ") + what);
    return std::stoll(std::string(s_.substr(start, pos_ - start)));
  }

  Expr parse_atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '-') {
      ++pos_;
      return neg(parse_factor());
    }
    if (c == '(') {
      ++pos_;
      Expr e = parse_expr();
      if (!eat_char(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit((unsigned char)c) || c == '.') return parse_number();
    if (std::isalpha((unsigned char)c)) return parse_ident();
    fail(std::string("unexpected character '") + c + "'");
  }

  Expr parse_number() {
    std::size_t start = pos_;
    bool is_float = false;
    while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      is_float = true;
      ++pos_;
      while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) ++pos_;
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) {
        is_float = true;
        while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) ++pos_;
      } else {
        pos_ = mark;  // 'e' belongs to an identifier-free context: error later
      }
    }
    std::string text(s_.substr(start, pos_ - start));
    if (text.empty() || text == ".") fail("malformed number");
    if (is_float) return real(std::strtod(text.c_str(), nullptr));
    errno = 0;
    char* end = nullptr;
    long long v = std::strtoll(text.c_str(), &end, 10);
    if (errno != 0) return real(std::strtod(text.c_str(), nullptr));
    return integer(v);
  }

  Expr parse_ident() {
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum((unsigned char)s_[pos_]) || s_[pos_] == '_'))
      ++pos_;
    std::string name(s_.substr(start, pos_ - start));
    if (peek_char('(')) {
      auto f = func_from_name(name);
      if (!f) {
        pos_ = start;
        fail("unknown function '" + name + "'");
      }
      ++pos_;  // '('
      Expr arg = parse_expr();
      if (!eat_char(')')) fail("expected ')' after function argument");
      return apply_fn(*f, arg);
    }
    return var(name);
  }
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).run(); }

}  // namespace ctrlgeo::symexpr
