#include "lieorder/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

namespace lieorder {

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> allowed) : text_(text), allowed_(allowed) {}

  Expr run() {
    Expr e = expr();
    skip_ws();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

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

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' but reached end of input");
      fail(std::string("expected '") + c + "'");
    }
  }

  Expr expr() {
    std::vector<Expr> terms{term()};
    while (true) {
      if (accept('+')) {
        terms.push_back(term());
      } else if (accept('-')) {
        terms.push_back(Expr::negate(term()));
      } else {
        break;
      }
    }
    return Expr::sum(std::move(terms));
  }

  Expr term() {
    Expr lhs = unary();
    while (true) {
      if (accept('*')) {
        // Consecutive products stay in one node; a quotient closes the run.
        std::vector<Expr> factors{lhs, unary()};
        while (true) {
          skip_ws();
          if (pos_ < text_.size() && text_[pos_] == '*') {
            ++pos_;
            factors.push_back(unary());
          } else {
            break;
          }
        }
        lhs = Expr::product(std::move(factors));
      } else if (accept('/')) {
        lhs = Expr::quotient(lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return Expr::negate(unary());
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (!accept('^')) return base;
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer exponent after '^'");
    if (pos_ - start > 6) {
      pos_ = start;
      fail("exponent too large");
    }
    const int n = std::stoi(std::string(text_.substr(start, pos_ - start)));
    return Expr::int_power(std::move(base), n);
  }

  Expr atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (c == '(') {
      ++pos_;
      Expr inner = expr();
      expect(')');
      return inner;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr number() {
    const std::size_t start = pos_;
    bool decimal = false;
    auto digits = [&] {
      const std::size_t s = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return pos_ - s;
    };
    std::size_t count = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      decimal = true;
      ++pos_;
      count += digits();
    }
    if (count == 0) {
      pos_ = start;
      fail("malformed number");
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      const std::size_t mark = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) {
        pos_ = mark;
        fail("malformed exponent in number");
      }
      decimal = true;
    }
    const std::string lexeme(text_.substr(start, pos_ - start));
    if (decimal) return Expr::constant(Number(std::strtod(lexeme.c_str(), nullptr)));
    return Expr::constant(Number(Rational(boost::multiprecision::cpp_int(lexeme))));
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string name(text_.substr(start, pos_ - start));
    const bool is_function = name == "sin" || name == "cos" || name == "exp";
    skip_ws();
    const bool has_paren = pos_ < text_.size() && text_[pos_] == '(';
    if (is_function) {
      if (!has_paren) {
        pos_ = start;
        throw ArityError("function '" + name + "' requires one argument", start);
      }
      ++pos_;
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == ')') {
        throw ArityError("function '" + name + "' takes exactly one argument, got none", start);
      }
      Expr arg = expr();
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == ',') {
        throw ArityError("function '" + name + "' takes exactly one argument", start);
      }
      expect(')');
      if (name == "sin") return Expr::sin(std::move(arg));
      if (name == "cos") return Expr::cos(std::move(arg));
      return Expr::exp(std::move(arg));
    }
    if (has_paren) throw UnknownIdentifierError(name, start);
    if (std::find(allowed_.begin(), allowed_.end(), name) == allowed_.end()) {
      throw UnknownIdentifierError(name, start);
    }
    return Expr::variable(name);
  }

  std::string_view text_;
  std::span<const std::string> allowed_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text, std::span<const std::string> allowed_vars) {
  return Parser(text, allowed_vars).run();
}

Expr parse(std::string_view text, std::initializer_list<std::string> allowed_vars) {
  const std::vector<std::string> vars(allowed_vars);
  return parse(text, std::span<const std::string>(vars));
}

}  // namespace lieorder
