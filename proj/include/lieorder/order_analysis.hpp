#pragma once

#include "lieorder/control_system.hpp"
#include "lieorder/vector_field.hpp"
#include "lieorder/zero_test.hpp"

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lieorder {

/// Coefficients of the k-th derivative of the switching vector,
///   phi^(k) = A_k + B_k u,  A_k[i] = <p, a[i]>,  B_k[i][j] = <p, b[i][j]>,
/// with a[i] = ad_f^k g_i and b[i][j] = [g_j, ad_f^{k-1} g_i].
struct SwitchingCoefficients {
  int k = 0;
  std::vector<VectorField> a_fields;
  std::vector<std::vector<VectorField>> b_fields;
};

using BracketFn = std::function<VectorField(const VectorField&, const VectorField&)>;

/// Memoized ad_f^k g_i for every input of a system.
class BracketTower {
 public:
  /// `bracket` replaces lie_bracket everywhere, for fault-injection tests.
  explicit BracketTower(const ControlSystem& sys, BracketFn bracket = {});
  ~BracketTower();
  BracketTower(BracketTower&&) noexcept;

  const ControlSystem& system() const { return sys_; }
  std::size_t input_count() const { return sys_.input_count(); }
  /// ad_f^k g_i
  VectorField ad(std::size_t i, int k) const;
  /// [g_j, ad_f^{k-1} g_i], k >= 1
  VectorField b_field(std::size_t i, std::size_t j, int k) const;
  VectorField bracket(const VectorField& a, const VectorField& b) const;
  SwitchingCoefficients coefficients(int k) const;

 private:
  struct Chain;
  ControlSystem sys_;
  BracketFn bracket_;
  std::vector<std::unique_ptr<Chain>> chains_;
};

/// Throws Error for k < 1 or a system with a pending running cost.
SwitchingCoefficients switching_coeffs(const ControlSystem& sys, int k);

struct LevelEvidence {
  int level = 0;
  /// verdicts[i][j] tests b[i][j] at this level.
  std::vector<std::vector<FieldVerdict>> verdicts;
  bool all_zero() const;
  /// First nonzero entry in row-major order, if any.
  std::optional<std::pair<std::size_t, std::size_t>> first_nonzero() const;
};

struct OrderReport {
  bool found = false;
  int k = 0;
  /// k/2, exact.
  Rational q;
  std::vector<LevelEvidence> evidence;
  /// k_max when the search ended without finding a level.
  std::optional<int> truncated_at;
};

inline constexpr int kDefaultMaxLevel = 10;

/// First level k at which some bracket [g_j, ad_f^{k-1} g_i] is not
/// identically zero. Since p is free, B_k vanishes identically exactly when
/// all these fields do, so no adjoint sampling is needed. Rejects k_max < 1
/// and systems with a pending running cost (extend them first).
OrderReport problem_order(const ControlSystem& sys, int k_max = kDefaultMaxLevel,
                          const ZeroTestPolicy& policy = {});
OrderReport problem_order(const BracketTower& tower, int k_max, const ZeroTestPolicy& policy);

struct ParityCheck {
  /// Single input and an order found within k_max.
  bool applicable = false;
  bool k_even = false;
  /// Applicable with odd k: single-input orders are integers, so this is
  /// an implementation fault.
  bool inconsistent = false;
  OrderReport report;
};

ParityCheck verify_single_input_parity(const ControlSystem& sys, int k_max = kDefaultMaxLevel,
                                       const ZeroTestPolicy& policy = {});

enum class IdentityKind { Shift, AlternatingSign, EvenLevelVanishes };

struct IdentityCheck {
  IdentityKind kind;
  int j = 0;
  int l = 0;
  bool passed = false;
  FieldVerdict verdict;
  std::string description;
};

struct IdentityReport {
  /// Largest k* with [g, ad_f^i g] == 0 for all 0 <= i < k*.
  int k_star = 0;
  /// k* reached the depth cap, so the true value may be larger.
  bool capped = false;
  std::vector<IdentityCheck> checks;
  bool all_passed() const;
};

inline constexpr int kDefaultIdentityDepth = 8;

/// Single-input bracket identities, with k* as above:
///   [ad^j g, ad^l g] + [ad^{j-1} g, ad^{l+1} g] == 0   for 1 <= j <= k*, 0 <= l <= k*-(j+1)
///   [g, ad^{k*} g] - (-1)^j [ad^j g, ad^{k*-j} g] == 0 for 0 <= j <= k*
///   [g, ad^{k*} g] == 0                                when k* is even
/// Throws Error if the system does not have exactly one input.
IdentityReport verify_bracket_identities(const ControlSystem& sys, const ZeroTestPolicy& policy = {},
                                         int depth_cap = kDefaultIdentityDepth, BracketFn bracket = {});

struct LocalOrderResult {
  bool found = false;
  int k_local = 0;
  /// m x m values of B_{k_local} at (x, p), row-major by i.
  std::vector<std::vector<double>> b_values;
  int rank_estimate = 0;
};

/// Numeric B_l evaluation at points, with brackets compiled once per level.
class LocalOrderEvaluator {
 public:
  explicit LocalOrderEvaluator(const ControlSystem& sys);

  /// B_level at (x, p). Throws EvalError naming the offending bracket.
  std::vector<std::vector<double>> b_matrix(int level, std::span<const double> x, std::span<const double> p) const;
  /// First level in 1..k_max with max |B| > tolerance.
  LocalOrderResult at(std::span<const double> x, std::span<const double> p, int k_max, double tolerance) const;

 private:
  const std::vector<std::vector<CompiledField>>& level(int k) const;
  BracketTower tower_;
  mutable std::mutex mutex_;
  mutable std::vector<std::vector<std::vector<CompiledField>>> compiled_;
};

LocalOrderResult local_order_at(const ControlSystem& sys, std::span<const double> x, std::span<const double> p,
                                int k_max = kDefaultMaxLevel, double tolerance = 1e-9);

/// Number of singular values above tolerance * largest.
int numerical_rank(const std::vector<std::vector<double>>& m, double tolerance);

std::string to_string(IdentityKind kind);

}  // namespace lieorder
