#include "lieorder/expr.hpp"

namespace lieorder {

namespace {

Expr derivative(const Expr& e, std::string_view var) {
  const Expr zero = Expr::constant(Number(0));
  switch (e.kind()) {
    case Kind::Constant: return zero;
    case Kind::Variable: return Expr::constant(Number(e.name() == var ? 1 : 0));
    case Kind::Negate: return Expr::negate(derivative(e.child(), var));
    case Kind::Sum: {
      std::vector<Expr> terms;
      for (const auto& c : e.children()) terms.push_back(derivative(c, var));
      return Expr::sum(std::move(terms));
    }
    case Kind::Product: {
      const auto kids = e.children();
      std::vector<Expr> terms;
      for (std::size_t i = 0; i < kids.size(); ++i) {
        const Expr d = derivative(kids[i], var);
        if (d.is_zero_constant()) continue;
        std::vector<Expr> factors(kids.begin(), kids.end());
        factors[i] = d;
        terms.push_back(Expr::product(std::move(factors)));
      }
      return terms.empty() ? zero : Expr::sum(std::move(terms));
    }
    case Kind::Quotient: {
      const Expr& a = e.child(0);
      const Expr& b = e.child(1);
      return Expr::quotient(derivative(a, var) * b - a * derivative(b, var), Expr::int_power(b, 2));
    }
    case Kind::IntPower: {
      const int n = e.exponent();
      return Expr::product({Expr::constant(Number(n)), Expr::int_power(e.child(), n - 1),
                            derivative(e.child(), var)});
    }
    case Kind::Sin: return Expr::cos(e.child()) * derivative(e.child(), var);
    case Kind::Cos: return -(Expr::sin(e.child()) * derivative(e.child(), var));
    case Kind::Exp: return e * derivative(e.child(), var);
  }
  return zero;
}

}  // namespace

Expr diff(const Expr& e, std::string_view var) { return simplify(derivative(simplify(e), var)); }

}  // namespace lieorder
