#include "lieorder/extremal_sim.hpp"

#include "lieorder/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

namespace lieorder {

namespace {

struct SparseEntry {
  std::size_t row;
  std::size_t col;
  CompiledExpr value;
};

std::vector<SparseEntry> compile_jacobian(const VectorField& h) {
  const ExprMatrix jac = jacobian(h);
  std::vector<SparseEntry> entries;
  for (std::size_t i = 0; i < jac.rows(); ++i) {
    for (std::size_t j = 0; j < jac.cols(); ++j) {
      if (jac(i, j).is_zero_constant()) continue;
      entries.push_back({i, j, CompiledExpr(jac(i, j), h.state_names())});
    }
  }
  return entries;
}

void check_size(std::span<const double> v, std::size_t n, const char* what) {
  if (v.size() != n) {
    throw DimensionError(std::string(what) + ": expected " + std::to_string(n) + " components, got " +
                         std::to_string(v.size()));
  }
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double d) { return std::isfinite(d); });
}

std::string format_vector(std::span<const double> v) {
  std::string out = "(";
  char buf[32];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.6g", v[i]);
    if (i) out += ", ";
    out += buf;
  }
  return out + ")";
}

// Compiled right-hand side of the state/adjoint system.
class ExtremalDynamics {
 public:
  explicit ExtremalDynamics(const ControlSystem& sys)
      : n_(sys.dimension()), f_(sys.drift()), df_(compile_jacobian(sys.drift())) {
    for (const auto& g : sys.inputs()) {
      g_.emplace_back(g);
      dg_.push_back(compile_jacobian(g));
    }
  }

  // z = (x, p); u fixed for the call.
  void operator()(std::span<const double> z, std::span<const double> u, std::span<double> dz) const {
    const auto x = z.first(n_);
    const auto p = z.subspan(n_, n_);
    auto dx = dz.first(n_);
    auto dp = dz.subspan(n_, n_);
    f_(x, dx);
    std::fill(dp.begin(), dp.end(), 0.0);
    for (const auto& e : df_) dp[e.col] -= e.value(x) * p[e.row];
    for (std::size_t k = 0; k < g_.size(); ++k) {
      if (u[k] == 0.0) continue;
      g_[k](x, scratch_);
      for (std::size_t i = 0; i < n_; ++i) dx[i] += scratch_[i] * u[k];
      for (const auto& e : dg_[k]) dp[e.col] -= u[k] * e.value(x) * p[e.row];
    }
  }

 private:
  std::size_t n_;
  CompiledField f_;
  std::vector<SparseEntry> df_;
  std::vector<CompiledField> g_;
  std::vector<std::vector<SparseEntry>> dg_;
  mutable std::vector<double> scratch_ = std::vector<double>(n_);
};

struct CompiledSystem {
  CompiledField f;
  std::vector<CompiledField> g;

  explicit CompiledSystem(const ControlSystem& sys) : f(sys.drift()) {
    for (const auto& gi : sys.inputs()) g.emplace_back(gi);
  }

  std::vector<double> phi(std::span<const double> x, std::span<const double> p) const {
    std::vector<double> out;
    out.reserve(g.size());
    for (const auto& gi : g) out.push_back(dot(p, gi(x)));
    return out;
  }

  double hamiltonian(std::span<const double> x, std::span<const double> p, std::span<const double> u) const {
    double h = dot(p, f(x));
    const auto ph = phi(x, p);
    for (std::size_t i = 0; i < ph.size(); ++i) h += ph[i] * u[i];
    return h;
  }
};

}  // namespace

const std::vector<double>& PiecewiseControl::at(double t) const {
  if (table.empty()) throw ConfigError("piecewise control table is empty");
  auto it = std::upper_bound(table.begin(), table.end(), t,
                             [](double value, const auto& row) { return value < row.first; });
  if (it == table.begin()) return table.front().second;
  return std::prev(it)->second;
}

void SimConfig::validate(const ControlSystem& sys) const {
  const std::size_t n = sys.dimension();
  const std::size_t m = sys.input_count();
  if (initial_state.size() != n) {
    throw ConfigError("initial state has " + std::to_string(initial_state.size()) + " components, expected " +
                      std::to_string(n));
  }
  if (initial_adjoint.size() != n) {
    throw ConfigError("initial adjoint has " + std::to_string(initial_adjoint.size()) + " components, expected " +
                      std::to_string(n));
  }
  if (!all_finite(initial_state) || !all_finite(initial_adjoint)) throw ConfigError("initial values must be finite");
  if (!(step > 0.0) || !std::isfinite(step)) throw ConfigError("step must be positive");
  if (!(horizon >= step) || !std::isfinite(horizon)) throw ConfigError("horizon must be at least one step");
  if (lambda != 0 && lambda != 1) throw ConfigError("lambda must be 0 or 1");
  if (!(singular_tolerance > 0.0)) throw ConfigError("singular tolerance must be positive");
  if (!(min_length() > 0.0)) throw ConfigError("singular minimum length must be positive");

  bool adjoint_zero = true;
  for (std::size_t i = sys.is_cost_extended() ? 1 : 0; i < n; ++i) {
    adjoint_zero = adjoint_zero && initial_adjoint[i] == 0.0;
  }
  if (lambda == 0 && adjoint_zero) throw ConfigError("lambda and the initial adjoint cannot both be zero");

  if (const auto* fixed = std::get_if<FixedControl>(&policy)) {
    if (fixed->u.size() != m) {
      throw ConfigError("fixed control has " + std::to_string(fixed->u.size()) + " components, expected " +
                        std::to_string(m));
    }
  } else if (const auto* pw = std::get_if<PiecewiseControl>(&policy)) {
    if (pw->table.empty()) throw ConfigError("piecewise control table is empty");
    for (std::size_t r = 0; r < pw->table.size(); ++r) {
      if (pw->table[r].second.size() != m) {
        throw ConfigError("piecewise control row " + std::to_string(r) + " has " +
                          std::to_string(pw->table[r].second.size()) + " controls, expected " + std::to_string(m));
      }
      if (r > 0 && !(pw->table[r].first > pw->table[r - 1].first)) {
        throw ConfigError("piecewise control times must be strictly increasing");
      }
    }
  } else if (std::get<BangBang>(policy).deadband < 0.0) {
    throw ConfigError("deadband must be non-negative");
  }
}

void write_csv(const Trajectory& traj, std::ostream& out) {
  const std::size_t n = traj.state_names.size();
  const std::size_t m = traj.input_count;
  out << "t";
  for (std::size_t i = 1; i <= n; ++i) out << ",x_" << i;
  for (std::size_t i = 1; i <= n; ++i) out << ",p_" << i;
  for (std::size_t i = 1; i <= m; ++i) out << ",u_" << i;
  for (std::size_t i = 1; i <= m; ++i) out << ",phi_" << i;
  out << ",H\n";
  char buf[40];
  auto put = [&](double v, bool first = false) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    if (!first) out << ',';
    out << buf;
  };
  for (const auto& s : traj.samples) {
    put(s.t, true);
    for (double v : s.x) put(v);
    for (double v : s.p) put(v);
    for (double v : s.u) put(v);
    for (double v : s.phi) put(v);
    put(s.H);
    out << '\n';
  }
}

double hamiltonian(const ControlSystem& sys, std::span<const double> x, std::span<const double> p,
                   std::span<const double> u, int lambda) {
  check_size(x, sys.dimension(), "state");
  check_size(p, sys.dimension(), "adjoint");
  check_size(u, sys.input_count(), "control");
  std::vector<double> adj(p.begin(), p.end());
  if (sys.is_cost_extended()) adj[0] = -lambda;
  double h = dot(adj, CompiledField(sys.drift())(x));
  for (std::size_t i = 0; i < sys.input_count(); ++i) {
    if (u[i] != 0.0) h += dot(adj, CompiledField(sys.input(i))(x)) * u[i];
  }
  if (sys.cost() && lambda != 0) {
    const auto& names = sys.state_names();
    double running = CompiledExpr(sys.cost()->f0, names)(x);
    for (std::size_t i = 0; i < sys.input_count(); ++i) {
      if (u[i] != 0.0) running += CompiledExpr(sys.cost()->g0[i], names)(x) * u[i];
    }
    h -= lambda * running;
  }
  return h;
}

std::vector<double> switching_values(const ControlSystem& sys, std::span<const double> x,
                                     std::span<const double> p) {
  check_size(x, sys.dimension(), "state");
  check_size(p, sys.dimension(), "adjoint");
  return CompiledSystem(sys).phi(x, p);
}

std::vector<double> bang_bang_control(std::span<const double> phi, double k_value, std::span<const double> last_u,
                                      double deadband) {
  std::vector<double> u(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (std::abs(phi[i]) > deadband) {
      u[i] = phi[i] > 0.0 ? k_value : -k_value;
    } else {
      u[i] = i < last_u.size() ? last_u[i] : 0.0;
    }
  }
  return u;
}

Trajectory integrate_extremal(const ControlSystem& sys, const SimConfig& config) {
  if (sys.has_cost()) throw Error("system has a running cost; apply extend_with_cost before simulating");
  config.validate(sys);

  const std::size_t n = sys.dimension();
  const std::size_t m = sys.input_count();
  const ExtremalDynamics rhs(sys);
  const CompiledSystem compiled(sys);

  Trajectory traj;
  traj.state_names = sys.state_names();
  traj.input_count = m;
  traj.step = config.step;

  const double h = config.step;
  const auto steps = static_cast<std::size_t>(std::floor(config.horizon / h + 1e-9));
  traj.samples.reserve(steps + 1);

  std::vector<double> z(2 * n);
  std::copy(config.initial_state.begin(), config.initial_state.end(), z.begin());
  std::copy(config.initial_adjoint.begin(), config.initial_adjoint.end(), z.begin() + n);
  if (sys.is_cost_extended()) z[n] = -config.lambda;

  std::vector<double> last_u(m, 0.0);
  auto control = [&](double t, std::span<const double> phi) -> std::vector<double> {
    return std::visit(
        [&](const auto& pol) -> std::vector<double> {
          using P = std::decay_t<decltype(pol)>;
          if constexpr (std::is_same_v<P, BangBang>) {
            return bang_bang_control(phi, sys.bound_at(t), last_u, pol.deadband);
          } else if constexpr (std::is_same_v<P, FixedControl>) {
            return pol.u;
          } else {
            return pol.at(t);
          }
        },
        config.policy);
  };

  std::vector<double> k1(2 * n), k2(2 * n), k3(2 * n), k4(2 * n), tmp(2 * n);
  for (std::size_t step = 0; step <= steps; ++step) {
    const double t = static_cast<double>(step) * h;
    Sample s;
    try {
      const std::span<const double> x(z.data(), n);
      const std::span<const double> p(z.data() + n, n);
      s.t = t;
      s.x.assign(x.begin(), x.end());
      s.p.assign(p.begin(), p.end());
      s.phi = compiled.phi(x, p);
      s.u = control(t, s.phi);
      s.H = compiled.hamiltonian(x, p, s.u);
    } catch (const EvalError& e) {
      traj.abort = AbortKind::EvaluationFailure;
      traj.abort_reason = std::string(e.what()) + " at t = " + std::to_string(t);
      return traj;
    }
    if (!all_finite(s.phi) || !std::isfinite(s.H)) {
      traj.abort = AbortKind::Divergence;
      traj.abort_reason = "non-finite switching function or Hamiltonian at t = " + std::to_string(t);
      return traj;
    }
    last_u = s.u;
    traj.samples.push_back(std::move(s));
    traj.abort_time = t;
    if (step == steps) break;

    const auto& u = traj.samples.back().u;
    try {
      rhs(z, u, k1);
      for (std::size_t i = 0; i < 2 * n; ++i) tmp[i] = z[i] + 0.5 * h * k1[i];
      rhs(tmp, u, k2);
      for (std::size_t i = 0; i < 2 * n; ++i) tmp[i] = z[i] + 0.5 * h * k2[i];
      rhs(tmp, u, k3);
      for (std::size_t i = 0; i < 2 * n; ++i) tmp[i] = z[i] + h * k3[i];
      rhs(tmp, u, k4);
    } catch (const EvalError& e) {
      traj.abort = AbortKind::EvaluationFailure;
      traj.abort_reason = std::string(e.what()) + " in step from t = " + std::to_string(t);
      return traj;
    }
    for (std::size_t i = 0; i < 2 * n; ++i) z[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (!all_finite(z)) {
      traj.abort = AbortKind::Divergence;
      traj.abort_reason = "state diverged in step from t = " + std::to_string(t) + ", last state " +
                          format_vector(traj.samples.back().x);
      return traj;
    }
  }
  return traj;
}

std::vector<std::vector<Interval>> detect_singular_intervals(const Trajectory& traj, const SimConfig& config) {
  std::vector<std::vector<Interval>> result(traj.input_count);
  const double tol = config.singular_tolerance;
  // Grid times carry rounding, so the minimum length is compared with slack.
  const double min_length = config.min_length() * (1.0 - 1e-9);
  for (std::size_t i = 0; i < traj.input_count; ++i) {
    std::size_t r = 0;
    while (r < traj.samples.size()) {
      if (!(std::abs(traj.samples[r].phi[i]) < tol)) {
        ++r;
        continue;
      }
      std::size_t e = r;
      while (e + 1 < traj.samples.size() && std::abs(traj.samples[e + 1].phi[i]) < tol) ++e;
      const Interval iv{traj.samples[r].t, traj.samples[e].t};
      if (iv.end - iv.start >= min_length) result[i].push_back(iv);
      r = e + 1;
    }
  }
  return result;
}

ArcOrder local_order_on_arc(const ControlSystem& sys, const Trajectory& traj, Interval interval, int k_max,
                            double tolerance) {
  ArcOrder arc;
  if (traj.samples.empty()) return arc;
  const double slack = 1e-9 * std::max(1.0, traj.step);
  if (interval.start < traj.samples.front().t - slack || interval.end > traj.samples.back().t + slack ||
      interval.end < interval.start) {
    throw Error("interval lies outside the trajectory");
  }
  const LocalOrderEvaluator evaluator(sys);
  std::map<int, std::size_t> votes;
  for (const auto& s : traj.samples) {
    if (s.t < interval.start - slack || s.t > interval.end + slack) continue;
    auto r = evaluator.at(s.x, s.p, k_max, tolerance);
    if (r.found) {
      ++votes[r.k_local];
    } else {
      ++arc.dissent;
    }
    arc.times.push_back(s.t);
    arc.samples.push_back(std::move(r));
  }
  std::size_t best = 0;
  for (const auto& [k, count] : votes) {
    if (count > best) {
      best = count;
      arc.consensus = k;
    }
  }
  return arc;
}

double check_pairing_derivative(const ControlSystem& sys, const Trajectory& traj, const VectorField& h) {
  if (traj.samples.size() < 3) throw Error("derivative check needs at least three samples");
  if (h.state_names() != sys.state_names()) throw DimensionError("probe field does not match the system states");

  const CompiledField probe(h);
  const CompiledField drift_term(lie_bracket(sys.drift(), h));
  std::vector<CompiledField> input_terms;
  for (const auto& g : sys.inputs()) input_terms.emplace_back(lie_bracket(g, h));

  std::vector<double> psi(traj.samples.size());
  for (std::size_t k = 0; k < psi.size(); ++k) psi[k] = dot(traj.samples[k].p, probe(traj.samples[k].x));

  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < traj.samples.size(); ++k) {
    const auto& s = traj.samples[k];
    if (traj.samples[k - 1].u != s.u) continue;
    const double dt = traj.samples[k + 1].t - traj.samples[k - 1].t;
    const double lhs = (psi[k + 1] - psi[k - 1]) / dt;
    double rhs = dot(s.p, drift_term(s.x));
    for (std::size_t i = 0; i < input_terms.size(); ++i) {
      if (s.u[i] != 0.0) rhs += s.u[i] * dot(s.p, input_terms[i](s.x));
    }
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

}  // namespace lieorder
