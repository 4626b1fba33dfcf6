#pragma once

#include "lieorder/expr.hpp"
#include "lieorder/zero_test.hpp"

#include <cstddef>
#include <memory>
#include <mutex>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace lieorder {

/// A vector field on R^d: one expression per state coordinate.
class VectorField {
 public:
  VectorField() = default;
  /// Throws DimensionError if the sizes differ, or if a component uses a
  /// variable outside `state_names`.
  VectorField(std::vector<std::string> state_names, std::vector<Expr> components);

  static VectorField zero(std::vector<std::string> state_names);
  /// Parses one expression per coordinate.
  static VectorField parse(std::vector<std::string> state_names, std::span<const std::string> texts);
  static VectorField parse(std::vector<std::string> state_names, std::initializer_list<std::string> texts) {
    return parse(std::move(state_names), std::span<const std::string>(texts.begin(), texts.size()));
  }

  std::size_t dimension() const { return components_.size(); }
  const std::vector<std::string>& state_names() const { return names_; }
  std::span<const Expr> components() const { return components_; }
  const Expr& operator[](std::size_t i) const { return components_[i]; }

  VectorField simplified() const;

  /// Component-wise structural equality of the stored trees.
  friend bool operator==(const VectorField& a, const VectorField& b);

  /// Text form "(c1, c2, ...)".
  std::string to_text() const;

 private:
  std::vector<std::string> names_;
  std::vector<Expr> components_;
};

/// Simplified component-wise sum, difference and scaling.
VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(const Number& c, const VectorField& a);

/// rows x cols grid of expressions, row-major.
class ExprMatrix {
 public:
  ExprMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Expr& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  Expr& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Expr> entries_;
};

/// Entry (i, j) is d h_i / d x_j.
ExprMatrix jacobian(const VectorField& h);

/// [a, b] = (Db) a - (Da) b. With this sign
///   d/dt <p, h> = <p, [f, h] + sum_i u_i [g_i, h]>
/// holds along extremals. Throws DimensionError on mismatched state lists.
VectorField lie_bracket(const VectorField& a, const VectorField& b);

/// ad_f^k g, with ad^0 = g and ad^k = [f, ad^{k-1}], simplified per level.
VectorField ad_pow(const VectorField& f, const VectorField& g, int k);

/// Memoized levels ad_f^k g for one (f, g) pair. Safe to share between
/// threads; concurrent callers may both compute a level, the stored value
/// is the same either way.
class AdChain {
 public:
  AdChain(VectorField f, VectorField g);

  /// Computes missing levels on demand.
  VectorField level(int k) const;
  int cached_levels() const;
  const VectorField& drift() const { return f_; }
  const VectorField& input() const { return g_; }

 private:
  VectorField f_;
  VectorField g_;
  mutable std::mutex mutex_;
  mutable std::vector<VectorField> levels_;
};

struct FieldVerdict {
  bool zero = true;
  /// Index of the first component found nonzero.
  std::size_t component = 0;
  Binding witness;
  double value = 0.0;
};

/// Zero iff every component tests zero; all components are sampled over
/// the full state space.
FieldVerdict vf_is_zero(const VectorField& h, const ZeroTestPolicy& policy = {});

/// Numeric evaluation of all components at a state point.
class CompiledField {
 public:
  CompiledField() = default;
  explicit CompiledField(const VectorField& h);
  std::size_t dimension() const { return components_.size(); }
  void operator()(std::span<const double> x, std::span<double> out) const;
  std::vector<double> operator()(std::span<const double> x) const;

 private:
  std::vector<CompiledExpr> components_;
};

double dot(std::span<const double> a, std::span<const double> b);

}  // namespace lieorder
