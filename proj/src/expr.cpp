#include "lieorder/expr.hpp"

#include <boost/container_hash/hash.hpp>

#include <algorithm>
#include <functional>
#include <ostream>
#include <stdexcept>

namespace lieorder {

struct Expr::Node {
  Kind kind = Kind::Constant;
  Number value;
  std::string name;
  std::vector<Expr> children;
  int exponent = 0;
  std::size_t hash = 0;
  std::size_t size = 1;
};

namespace {

std::size_t number_hash(const Number& n) {
  if (n.is_exact()) {
    std::size_t h = 0x51ed27;
    boost::hash_combine(h, boost::multiprecision::numerator(n.rational()).str());
    boost::hash_combine(h, boost::multiprecision::denominator(n.rational()).str());
    return h;
  }
  return std::hash<double>{}(n.decimal());
}

}  // namespace

namespace detail {

struct NodeFactory {
  static Expr make(Kind kind, std::vector<Expr> children, Number value = {}, std::string name = {},
                   int exponent = 0) {
    auto node = std::make_shared<Expr::Node>();
    node->kind = kind;
    node->value = std::move(value);
    node->name = std::move(name);
    node->children = std::move(children);
    node->exponent = exponent;
    std::size_t h = static_cast<std::size_t>(kind) * 0x9e3779b97f4a7c15ULL;
    switch (kind) {
      case Kind::Constant: boost::hash_combine(h, number_hash(node->value)); break;
      case Kind::Variable: boost::hash_combine(h, node->name); break;
      case Kind::IntPower: boost::hash_combine(h, exponent); break;
      default: break;
    }
    for (const auto& c : node->children) {
      boost::hash_combine(h, c.hash());
      node->size += c.size();
    }
    node->hash = h;
    return Expr::from_node(std::move(node));
  }
};

}  // namespace detail

Expr Expr::from_node(std::shared_ptr<const Node> node) { return Expr(std::move(node)); }

Expr::Expr() : Expr(constant(Number(0))) {}

Expr Expr::constant(Number value) {
  return detail::NodeFactory::make(Kind::Constant, {}, std::move(value));
}

Expr Expr::variable(std::string name) {
  if (name.empty()) throw std::invalid_argument("Expr::variable: empty name");
  return detail::NodeFactory::make(Kind::Variable, {}, {}, std::move(name));
}

Expr Expr::negate(Expr child) {
  return detail::NodeFactory::make(Kind::Negate, {std::move(child)});
}

Expr Expr::sum(std::vector<Expr> terms) {
  if (terms.empty()) return constant(Number(0));
  if (terms.size() == 1) return std::move(terms.front());
  return detail::NodeFactory::make(Kind::Sum, std::move(terms));
}

Expr Expr::product(std::vector<Expr> factors) {
  if (factors.empty()) return constant(Number(1));
  if (factors.size() == 1) return std::move(factors.front());
  return detail::NodeFactory::make(Kind::Product, std::move(factors));
}

Expr Expr::quotient(Expr numerator, Expr denominator) {
  return detail::NodeFactory::make(Kind::Quotient, {std::move(numerator), std::move(denominator)});
}

Expr Expr::int_power(Expr base, int exponent) {
  if (exponent < 0) throw std::invalid_argument("Expr::int_power: negative exponent");
  if (exponent == 0) return constant(Number(1));
  if (exponent == 1) return base;
  return detail::NodeFactory::make(Kind::IntPower, {std::move(base)}, {}, {}, exponent);
}

Expr Expr::sin(Expr child) { return detail::NodeFactory::make(Kind::Sin, {std::move(child)}); }
Expr Expr::cos(Expr child) { return detail::NodeFactory::make(Kind::Cos, {std::move(child)}); }
Expr Expr::exp(Expr child) { return detail::NodeFactory::make(Kind::Exp, {std::move(child)}); }

Kind Expr::kind() const { return node_->kind; }

bool Expr::is_zero_constant() const { return is_constant() && node_->value.is_zero(); }

const Number& Expr::value() const {
  if (!is_constant()) throw std::logic_error("Expr::value on non-constant");
  return node_->value;
}

const std::string& Expr::name() const {
  if (!is(Kind::Variable)) throw std::logic_error("Expr::name on non-variable");
  return node_->name;
}

std::span<const Expr> Expr::children() const { return node_->children; }

int Expr::exponent() const { return node_->exponent; }

std::size_t Expr::hash() const { return node_->hash; }

std::size_t Expr::size() const { return node_->size; }

int compare(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case Kind::Constant: return compare(a.value(), b.value());
    case Kind::Variable: {
      const int c = a.name().compare(b.name());
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case Kind::IntPower:
      if (a.exponent() != b.exponent()) return a.exponent() < b.exponent() ? -1 : 1;
      break;
    default: break;
  }
  const auto ca = a.children();
  const auto cb = b.children();
  if (ca.size() != cb.size()) return ca.size() < cb.size() ? -1 : 1;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (const int c = compare(ca[i], cb[i]); c != 0) return c;
  }
  return 0;
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::sum({a, Expr::negate(b)}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::product({a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::quotient(a, b); }
Expr operator-(const Expr& a) { return Expr::negate(a); }

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << to_text(e); }

namespace {

void collect_variables(const Expr& e, std::vector<std::string>& out) {
  if (e.is(Kind::Variable)) {
    out.push_back(e.name());
    return;
  }
  for (const auto& c : e.children()) collect_variables(c, out);
}

}  // namespace

std::vector<std::string> variables(const Expr& e) {
  std::vector<std::string> out;
  collect_variables(e, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace lieorder
