#include "lieorder/vector_field.hpp"

#include <algorithm>

namespace lieorder {

VectorField::VectorField(std::vector<std::string> state_names, std::vector<Expr> components)
    : names_(std::move(state_names)), components_(std::move(components)) {
  if (names_.size() != components_.size()) {
    throw DimensionError("vector field has " + std::to_string(components_.size()) +
                         " components for " + std::to_string(names_.size()) + " states");
  }
  for (std::size_t i = 0; i < components_.size(); ++i) {
    for (const auto& v : variables(components_[i])) {
      if (std::find(names_.begin(), names_.end(), v) == names_.end()) {
        throw DimensionError("component " + std::to_string(i + 1) + " uses '" + v +
                             "', which is not a state");
      }
    }
  }
}

VectorField VectorField::zero(std::vector<std::string> state_names) {
  std::vector<Expr> comps(state_names.size());
  return VectorField(std::move(state_names), std::move(comps));
}

VectorField VectorField::parse(std::vector<std::string> state_names, std::span<const std::string> texts) {
  std::vector<Expr> comps;
  comps.reserve(texts.size());
  for (const auto& t : texts) comps.push_back(lieorder::parse(t, state_names));
  return VectorField(std::move(state_names), std::move(comps));
}

VectorField VectorField::simplified() const {
  VectorField out;
  out.names_ = names_;
  out.components_.reserve(components_.size());
  for (const auto& c : components_) out.components_.push_back(simplify(c));
  return out;
}

bool operator==(const VectorField& a, const VectorField& b) {
  return a.names_ == b.names_ && a.components_ == b.components_;
}

std::string VectorField::to_text() const {
  std::string s = "(";
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (i > 0) s += ", ";
    s += lieorder::to_text(components_[i]);
  }
  return s + ")";
}

namespace {

void require_same_space(const VectorField& a, const VectorField& b) {
  if (a.state_names() != b.state_names()) {
    throw DimensionError("vector fields live on different state spaces");
  }
}

}  // namespace

VectorField operator+(const VectorField& a, const VectorField& b) {
  require_same_space(a, b);
  std::vector<Expr> comps;
  for (std::size_t i = 0; i < a.dimension(); ++i) comps.push_back(simplify(a[i] + b[i]));
  return VectorField(a.state_names(), std::move(comps));
}

VectorField operator-(const VectorField& a, const VectorField& b) {
  require_same_space(a, b);
  std::vector<Expr> comps;
  for (std::size_t i = 0; i < a.dimension(); ++i) comps.push_back(simplify(a[i] - b[i]));
  return VectorField(a.state_names(), std::move(comps));
}

VectorField operator*(const Number& c, const VectorField& a) {
  std::vector<Expr> comps;
  for (const auto& e : a.components()) comps.push_back(simplify(Expr::constant(c) * e));
  return VectorField(a.state_names(), std::move(comps));
}

ExprMatrix jacobian(const VectorField& h) {
  const std::size_t d = h.dimension();
  ExprMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    const Expr c = simplify(h[i]);
    const auto used = variables(c);
    for (std::size_t j = 0; j < d; ++j) {
      if (std::binary_search(used.begin(), used.end(), h.state_names()[j])) {
        m(i, j) = diff(c, h.state_names()[j]);
      }
    }
  }
  return m;
}

VectorField lie_bracket(const VectorField& a, const VectorField& b) {
  require_same_space(a, b);
  const std::size_t d = a.dimension();
  const ExprMatrix da = jacobian(a);
  const ExprMatrix db = jacobian(b);
  std::vector<Expr> comps;
  comps.reserve(d);
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<Expr> terms;
    for (std::size_t j = 0; j < d; ++j) {
      if (!db(i, j).is_zero_constant() && !a[j].is_zero_constant()) terms.push_back(db(i, j) * a[j]);
      if (!da(i, j).is_zero_constant() && !b[j].is_zero_constant()) {
        terms.push_back(-(da(i, j) * b[j]));
      }
    }
    comps.push_back(simplify(Expr::sum(std::move(terms))));
  }
  return VectorField(a.state_names(), std::move(comps));
}

VectorField ad_pow(const VectorField& f, const VectorField& g, int k) {
  if (k < 0) throw std::invalid_argument("ad_pow: negative level");
  require_same_space(f, g);
  VectorField h = g.simplified();
  for (int i = 0; i < k; ++i) h = lie_bracket(f, h);
  return h;
}

AdChain::AdChain(VectorField f, VectorField g) : f_(f.simplified()), g_(std::move(g)) {
  require_same_space(f_, g_);
  levels_.push_back(g_.simplified());
}

VectorField AdChain::level(int k) const {
  if (k < 0) throw std::invalid_argument("AdChain::level: negative level");
  VectorField top;
  int have = 0;
  {
    std::lock_guard lock(mutex_);
    if (static_cast<std::size_t>(k) < levels_.size()) return levels_[static_cast<std::size_t>(k)];
    have = static_cast<int>(levels_.size()) - 1;
    top = levels_.back();
  }
  std::vector<VectorField> fresh;
  for (int i = have; i < k; ++i) {
    top = lie_bracket(f_, top);
    fresh.push_back(top);
  }
  std::lock_guard lock(mutex_);
  for (std::size_t i = 0; i < fresh.size(); ++i) {
    const std::size_t index = static_cast<std::size_t>(have) + 1 + i;
    if (index == levels_.size()) levels_.push_back(fresh[i]);
  }
  return top;
}

int AdChain::cached_levels() const {
  std::lock_guard lock(mutex_);
  return static_cast<int>(levels_.size());
}

FieldVerdict vf_is_zero(const VectorField& h, const ZeroTestPolicy& policy) {
  FieldVerdict out;
  for (std::size_t i = 0; i < h.dimension(); ++i) {
    const ZeroVerdict v = is_zero(h[i], h.state_names(), policy.derive({i}));
    if (!v.zero) {
      out.zero = false;
      out.component = i;
      out.witness = v.witness;
      out.value = v.value;
      return out;
    }
  }
  return out;
}

CompiledField::CompiledField(const VectorField& h) {
  components_.reserve(h.dimension());
  for (const auto& c : h.components()) components_.emplace_back(c, h.state_names());
}

void CompiledField::operator()(std::span<const double> x, std::span<double> out) const {
  for (std::size_t i = 0; i < components_.size(); ++i) out[i] = components_[i](x);
}

std::vector<double> CompiledField::operator()(std::span<const double> x) const {
  std::vector<double> out(components_.size());
  (*this)(x, out);
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace lieorder
