#pragma once

#include "lieorder/expr.hpp"
#include "lieorder/vector_field.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace lieorder {

/// Running cost f0(x) + sum_i g0_i(x) u_i.
struct RunningCost {
  Expr f0;
  std::vector<Expr> g0;
};

/// Affine control system  x' = f(x) + sum_i g_i(x) u_i,  |u_i| <= K(t),
/// with an optional running cost. Immutable once built.
class ControlSystem {
 public:
  /// Name of the time variable of the control bound.
  static constexpr const char* kTimeName = "t";
  /// Name of the cost state added by extend_with_cost.
  static constexpr const char* kCostStateName = "x0";

  /// Throws DimensionError when f, g, or the cost do not match the state
  /// list or each other. Name uniqueness is left to validate().
  ControlSystem(std::vector<std::string> state_names, VectorField drift, std::vector<VectorField> inputs,
                std::optional<RunningCost> cost = std::nullopt, std::optional<Expr> bound = std::nullopt,
                std::string label = {}, bool cost_extended = false);

  const std::vector<std::string>& state_names() const { return state_names_; }
  std::size_t dimension() const { return state_names_.size(); }
  std::size_t input_count() const { return inputs_.size(); }
  const VectorField& drift() const { return drift_; }
  const VectorField& input(std::size_t i) const { return inputs_.at(i); }
  const std::vector<VectorField>& inputs() const { return inputs_; }
  const std::optional<RunningCost>& cost() const { return cost_; }
  bool has_cost() const { return cost_.has_value(); }
  /// The control bound K(t); the constant 1 when the document omits it.
  const Expr& bound() const { return bound_; }
  double bound_at(double t) const;
  const std::string& label() const { return label_; }
  /// True when state 0 is the accumulated cost x0 added by extend_with_cost.
  bool is_cost_extended() const { return cost_extended_; }

 private:
  std::vector<std::string> state_names_;
  VectorField drift_;
  std::vector<VectorField> inputs_;
  std::optional<RunningCost> cost_;
  Expr bound_;
  std::string label_;
  bool cost_extended_ = false;
};

/// Builds a system from the JSON document form
///   { "states": [..], "inputs": m, "f": [..], "g": [[..], ..],
///     "cost": {"f0": "..", "g0": [..]}, "K": "..", "label": "..",
///     "cost_extended": false }
/// Throws SchemaError (with a location path) or DimensionError.
ControlSystem load_system(const nlohmann::json& document);
ControlSystem load_system_file(const std::filesystem::path& path);

nlohmann::json to_document(const ControlSystem& sys);

/// Prepends the cost state x0 with drift (f0, f) and inputs (g0_i, g_i).
/// The result has no running cost. Throws Error if the system has no cost
/// or already uses the name x0.
ControlSystem extend_with_cost(const ControlSystem& sys);

enum class Severity { Error, Warning };

struct Finding {
  Severity severity;
  std::string message;
  std::string location;
};

struct ValidationReport {
  std::vector<Finding> findings;
  bool ok() const;
  std::size_t error_count() const;
};

/// Checks names, dimensions, K > 0 on 100 points of [0, horizon], and that
/// every expression evaluates at a random point.
ValidationReport validate(const ControlSystem& sys, double horizon = 1.0);

}  // namespace lieorder
