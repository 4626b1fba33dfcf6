#pragma once

#include "lieorder/control_system.hpp"
#include "lieorder/order_analysis.hpp"
#include "lieorder/vector_field.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace lieorder {

/// u_i = sign(phi_i) K(t); inside the deadband the previous control is held.
struct BangBang {
  double deadband = 0.0;
};

struct FixedControl {
  std::vector<double> u;
};

/// Rows (t_start, u), sorted by t_start. The row with the largest
/// t_start <= t applies; the first row also covers earlier times.
struct PiecewiseControl {
  std::vector<std::pair<double, std::vector<double>>> table;
  const std::vector<double>& at(double t) const;
};

using ControlPolicy = std::variant<BangBang, FixedControl, PiecewiseControl>;

struct SimConfig {
  std::vector<double> initial_state;
  std::vector<double> initial_adjoint;
  int lambda = 1;
  double horizon = 1.0;
  double step = 1e-3;
  ControlPolicy policy = BangBang{};
  double singular_tolerance = 1e-6;
  /// Defaults to 10 * step.
  std::optional<double> singular_min_length;

  double min_length() const { return singular_min_length.value_or(10.0 * step); }
  /// Throws ConfigError. For cost-extended systems the x0 adjoint is taken
  /// to be -lambda, whatever initial_adjoint[0] holds.
  void validate(const ControlSystem& sys) const;
};

struct Sample {
  double t = 0.0;
  std::vector<double> x;
  std::vector<double> p;
  std::vector<double> u;
  std::vector<double> phi;
  double H = 0.0;
};

enum class AbortKind { None, EvaluationFailure, Divergence };

struct Trajectory {
  std::vector<std::string> state_names;
  std::size_t input_count = 0;
  double step = 0.0;
  std::vector<Sample> samples;
  AbortKind abort = AbortKind::None;
  std::string abort_reason;
  /// Time of the last good sample when aborted.
  double abort_time = 0.0;

  bool aborted() const { return abort != AbortKind::None; }
};

/// Columns t, x_1..x_n, p_1..p_n, u_1..u_m, phi_1..phi_m, H with a header row.
void write_csv(const Trajectory& traj, std::ostream& out);

/// H = <p, f> + sum_i <p, g_i> u_i. For cost-extended systems p[0] is
/// replaced by -lambda; a pending running cost adds -lambda (f0 + sum g0_i u_i).
double hamiltonian(const ControlSystem& sys, std::span<const double> x, std::span<const double> p,
                   std::span<const double> u, int lambda = 1);

/// phi_i = <p, g_i(x)>
std::vector<double> switching_values(const ControlSystem& sys, std::span<const double> x, std::span<const double> p);

std::vector<double> bang_bang_control(std::span<const double> phi, double k_value, std::span<const double> last_u,
                                      double deadband = 0.0);

/// Fixed-step RK4 on the coupled state/adjoint system with the control
/// frozen at its start-of-step value. Systems with a pending running cost
/// are rejected; extend them first. Evaluation failures and non-finite
/// states abort the run and keep the samples computed so far.
Trajectory integrate_extremal(const ControlSystem& sys, const SimConfig& config);

struct Interval {
  double start = 0.0;
  double end = 0.0;
};

/// Per input, maximal grid runs with |phi_i| < singular_tolerance lasting at
/// least min_length.
std::vector<std::vector<Interval>> detect_singular_intervals(const Trajectory& traj, const SimConfig& config);

struct ArcOrder {
  std::vector<double> times;
  std::vector<LocalOrderResult> samples;
  /// Most frequent k_local among samples where one was found; ties go to the smaller k.
  std::optional<int> consensus;
  /// Samples with no order up to k_max.
  std::size_t dissent = 0;
};

ArcOrder local_order_on_arc(const ControlSystem& sys, const Trajectory& traj, Interval interval,
                            int k_max = kDefaultMaxLevel, double tolerance = 1e-9);

/// Maximum over interior samples of | d/dt <p, h(x)> - <p, [f, h] + sum u_i [g_i, h]> |,
/// the derivative taken by central differences. Samples where the control
/// changes across the stencil are skipped.
double check_pairing_derivative(const ControlSystem& sys, const Trajectory& traj, const VectorField& h);

}  // namespace lieorder
