#include "lieorder/expr.hpp"

#include <string>

namespace lieorder {

namespace {

// Binding strength of the printed form; a child printed below its slot's
// minimum is parenthesized.
constexpr int kSum = 1;
constexpr int kTerm = 2;
constexpr int kUnary = 3;
constexpr int kPower = 4;
constexpr int kAtom = 5;

bool leading_negative_constant(const Expr& e) {
  return e.is(Kind::Product) && e.child(0).is_constant() && e.child(0).value().is_negative();
}

bool is_reciprocal(const Expr& e) {
  return e.is(Kind::Quotient) && e.child(0).is_constant() && e.child(0).value().is_exact() &&
         e.child(0).value().is_one();
}

int precedence(const Expr& e) {
  switch (e.kind()) {
    case Kind::Constant: {
      const std::string s = e.value().to_string();
      if (s.front() == '-') return kSum;
      return s.find('/') == std::string::npos ? kAtom : kTerm;
    }
    case Kind::Variable:
    case Kind::Sin:
    case Kind::Cos:
    case Kind::Exp: return kAtom;
    case Kind::Negate: return kUnary;
    case Kind::Sum: return kSum;
    case Kind::Product:
    case Kind::Quotient: return kTerm;
    case Kind::IntPower: return kPower;
  }
  return kAtom;
}

std::string render(const Expr& e);

std::string print(const Expr& e, int min_prec) {
  std::string s = render(e);
  if (precedence(e) < min_prec) return "(" + s + ")";
  return s;
}

// Product with its leading negative coefficient flipped (or dropped if it
// becomes one).
Expr negated_product(const Expr& e) {
  std::vector<Expr> rest(e.children().begin() + 1, e.children().end());
  const Number c = -e.child(0).value();
  if (!(c.is_exact() && c.is_one())) rest.insert(rest.begin(), Expr::constant(c));
  return Expr::product(std::move(rest));
}

std::string render_product(const Expr& e) {
  if (leading_negative_constant(e)) return "-" + print(negated_product(e), kTerm);
  const auto kids = e.children();
  std::size_t split = kids.size();
  while (split > 0 && is_reciprocal(kids[split - 1])) --split;
  std::string s;
  const std::size_t lead_end = (split > 0 && split < kids.size()) ? split : kids.size();
  for (std::size_t i = 0; i < lead_end; ++i) {
    if (i == 0) {
      s += print(kids[i], kTerm);
    } else {
      s += "*" + print(kids[i], kUnary);
    }
  }
  for (std::size_t i = lead_end; i < kids.size(); ++i) s += "/" + print(kids[i].child(1), kUnary);
  return s;
}

std::string render_sum(const Expr& e) {
  std::string s;
  bool first = true;
  for (const auto& c : e.children()) {
    if (first) {
      s += print(c, kSum);
      first = false;
      continue;
    }
    if (c.is(Kind::Negate)) {
      s += " - " + print(c.child(), kTerm);
    } else if (c.is_constant() && c.value().is_negative()) {
      s += " - " + print(Expr::constant(-c.value()), kTerm);
    } else if (leading_negative_constant(c)) {
      s += " - " + print(negated_product(c), kTerm);
    } else {
      s += " + " + print(c, kSum);
    }
  }
  return s;
}

std::string render(const Expr& e) {
  switch (e.kind()) {
    case Kind::Constant: return e.value().to_string();
    case Kind::Variable: return e.name();
    case Kind::Negate: return "-" + print(e.child(), kUnary);
    case Kind::Sum: return render_sum(e);
    case Kind::Product: return render_product(e);
    case Kind::Quotient: return print(e.child(0), kTerm) + "/" + print(e.child(1), kUnary);
    case Kind::IntPower: return print(e.child(), kAtom) + "^" + std::to_string(e.exponent());
    case Kind::Sin: return "sin(" + print(e.child(), 0) + ")";
    case Kind::Cos: return "cos(" + print(e.child(), 0) + ")";
    case Kind::Exp: return "exp(" + print(e.child(), 0) + ")";
  }
  return {};
}

}  // namespace

std::string to_text(const Expr& e) { return render(e); }

}  // namespace lieorder
