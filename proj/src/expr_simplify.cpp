#include "lieorder/expr.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

namespace lieorder {

namespace {

// A monomial is a sorted list of (atom, nonzero exponent). Atoms are
// variables, function applications, and (with negative exponent only)
// sums that ended up in a denominator.
using Monomial = std::vector<std::pair<Expr, int>>;

struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (const int c = compare(a[i].first, b[i].first); c != 0) return c < 0;
      if (a[i].second != b[i].second) return a[i].second < b[i].second;
    }
    return a.size() < b.size();
  }
};

using Poly = std::map<Monomial, Number, MonomialLess>;

Poly constant_poly(const Number& c) {
  if (c.is_zero()) return {};
  return Poly{{Monomial{}, c}};
}

Poly atom_poly(const Expr& atom, int exponent) {
  return Poly{{Monomial{{atom, exponent}}, Number(1)}};
}

void accumulate(Poly& acc, const Monomial& m, const Number& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = acc.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) acc.erase(it);
  }
}

Monomial merge(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    const int c = compare(a[i].first, b[j].first);
    if (c < 0) {
      out.push_back(a[i++]);
    } else if (c > 0) {
      out.push_back(b[j++]);
    } else {
      const int e = a[i].second + b[j].second;
      if (e != 0) out.emplace_back(a[i].first, e);
      ++i;
      ++j;
    }
  }
  out.insert(out.end(), a.begin() + static_cast<std::ptrdiff_t>(i), a.end());
  out.insert(out.end(), b.begin() + static_cast<std::ptrdiff_t>(j), b.end());
  return out;
}

Poly mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) accumulate(out, merge(ma, mb), ca * cb);
  }
  return out;
}

Poly scale(Poly p, const Number& c) {
  if (c.is_zero()) return {};
  for (auto it = p.begin(); it != p.end();) {
    it->second *= c;
    if (it->second.is_zero()) {
      it = p.erase(it);
    } else {
      ++it;
    }
  }
  return p;
}

Poly power(const Poly& p, int n) {
  Poly out = constant_poly(Number(1));
  for (int i = 0; i < n; ++i) out = mul(out, p);
  return out;
}

void flatten(const Expr& e, Kind kind, std::vector<Expr>& out) {
  if (e.is(kind)) {
    for (const auto& c : e.children()) flatten(c, kind, out);
  } else {
    out.push_back(e);
  }
}

int degree(const Monomial& m) {
  int d = 0;
  for (const auto& [atom, exponent] : m) d += exponent;
  return d;
}

Poly to_poly(const Expr& e);
Poly reciprocal(const Expr& e);

Expr from_poly(const Poly& p) {
  if (p.empty()) return Expr::constant(Number(0));
  std::vector<std::pair<const Monomial*, const Number*>> terms;
  terms.reserve(p.size());
  for (const auto& [m, c] : p) terms.emplace_back(&m, &c);
  // Higher degree first; within a degree, positive coefficients lead.
  std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    const int da = degree(*a.first);
    const int db = degree(*b.first);
    if (da != db) return da > db;
    return !a.second->is_negative() && b.second->is_negative();
  });
  std::vector<Expr> out;
  out.reserve(terms.size());
  for (const auto& [m, c] : terms) {
    std::vector<Expr> factors;
    factors.reserve(m->size() + 1);
    if (!c->is_one() || m->empty()) factors.push_back(Expr::constant(*c));
    for (const auto& [atom, exponent] : *m) {
      if (exponent > 0) {
        factors.push_back(Expr::int_power(atom, exponent));
      } else {
        factors.push_back(Expr::quotient(Expr::constant(Number(1)), Expr::int_power(atom, -exponent)));
      }
    }
    out.push_back(Expr::product(std::move(factors)));
  }
  return Expr::sum(std::move(out));
}

Expr fold_function(Kind kind, const Expr& arg) {
  if (arg.is_constant()) {
    const Number& v = arg.value();
    if (v.is_exact() && v.is_zero()) return Expr::constant(Number(kind == Kind::Sin ? 0 : 1));
    if (!v.is_exact()) {
      const double x = v.decimal();
      const double y = kind == Kind::Sin ? std::sin(x) : (kind == Kind::Cos ? std::cos(x) : std::exp(x));
      if (std::isfinite(y)) return Expr::constant(Number(y));
    }
  }
  switch (kind) {
    case Kind::Sin: return Expr::sin(arg);
    case Kind::Cos: return Expr::cos(arg);
    default: return Expr::exp(arg);
  }
}

Poly to_poly(const Expr& e) {
  switch (e.kind()) {
    case Kind::Constant: return constant_poly(e.value());
    case Kind::Variable: return atom_poly(e, 1);
    case Kind::Negate: return scale(to_poly(e.child()), Number(-1));
    case Kind::Sum: {
      std::vector<Expr> terms;
      flatten(e, Kind::Sum, terms);
      Poly acc;
      for (const auto& t : terms) {
        for (const auto& [m, c] : to_poly(t)) accumulate(acc, m, c);
      }
      return acc;
    }
    case Kind::Product: {
      std::vector<Expr> factors;
      flatten(e, Kind::Product, factors);
      Poly acc = constant_poly(Number(1));
      for (const auto& f : factors) {
        acc = mul(acc, to_poly(f));
        if (acc.empty()) break;
      }
      return acc;
    }
    case Kind::Quotient: {
      Poly den = reciprocal(e.child(1));
      return mul(to_poly(e.child(0)), den);
    }
    case Kind::IntPower: return power(to_poly(e.child()), e.exponent());
    case Kind::Sin:
    case Kind::Cos:
    case Kind::Exp: {
      const Expr folded = fold_function(e.kind(), from_poly(to_poly(e.child())));
      if (folded.is_constant()) return constant_poly(folded.value());
      return atom_poly(folded, 1);
    }
  }
  return {};
}

// 1/e as a polynomial. Products and powers in a denominator are split into
// reciprocal factors without expanding them; any remaining sum becomes a
// single reciprocal atom.
Poly reciprocal(const Expr& e) {
  switch (e.kind()) {
    case Kind::Constant:
      if (e.value().is_zero()) throw DivisionByZeroError(to_text(e));
      return constant_poly(Number(1) / e.value());
    case Kind::Negate: return scale(reciprocal(e.child()), Number(-1));
    case Kind::Product: {
      std::vector<Expr> factors;
      flatten(e, Kind::Product, factors);
      Poly acc = constant_poly(Number(1));
      for (const auto& f : factors) acc = mul(acc, reciprocal(f));
      return acc;
    }
    case Kind::IntPower: return power(reciprocal(e.child()), e.exponent());
    case Kind::Quotient: return mul(to_poly(e.child(1)), reciprocal(e.child(0)));
    default: break;
  }
  const Poly p = to_poly(e);
  if (p.empty()) throw DivisionByZeroError(to_text(e));
  if (p.size() > 1) return atom_poly(from_poly(p), -1);
  const auto& [m, c] = *p.begin();
  Poly out = constant_poly(Number(1) / c);
  for (const auto& [atom, exponent] : m) {
    if (exponent < 0 && atom.is(Kind::Sum)) {
      out = mul(out, power(to_poly(atom), -exponent));
    } else {
      out = mul(out, atom_poly(atom, -exponent));
    }
  }
  return out;
}

}  // namespace

Expr simplify(const Expr& e) { return from_poly(to_poly(e)); }

}  // namespace lieorder
