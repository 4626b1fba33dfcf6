// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "lieorder/control_system.hpp"
#include "lieorder/errors.hpp"
#include "lieorder/extremal_sim.hpp"
#include "lieorder/order_analysis.hpp"

#include "oracles.hpp"
#include "random_systems.hpp"
#include "systems.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

namespace {

using namespace lieorder;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

VectorField field(const std::vector<std::string>& names, std::initializer_list<std::string> texts) {
  return VectorField::parse(names, texts).simplified();
}

std::vector<double> uniform_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

SimConfig fixed(std::vector<double> x0, std::vector<double> p0, std::vector<double> u, double step) {
  SimConfig c;
  c.initial_state = std::move(x0);
  c.initial_adjoint = std::move(p0);
  c.policy = FixedControl{std::move(u)};
  c.step = step;
  return c;
}

// 1
Outcome counterexample_order() {
  const auto raw = problem_order(testing::counterexample());
  const auto ext = problem_order(extend_with_cost(testing::counterexample_with_cost()));
  const bool ok = raw.found && raw.k == 3 && raw.q == Rational(3, 2) && ext.found && ext.k == 3 &&
                  ext.q == Rational(3, 2);
  std::ostringstream d;
  d << "raw k = " << raw.k << ", q = " << raw.q.str() << "; cost-extended (7 states) k = " << ext.k
    << ", q = " << ext.q.str();
  return {ok, d.str()};
}

// 2
Outcome fuller_order() {
  const auto sys = testing::fuller();
  const auto& names = sys.state_names();
  const auto ad3 = ad_pow(sys.drift(), sys.input(0), 3);
  const auto top = lie_bracket(sys.input(0), ad3);
  const bool chain = ad3 == field(names, {"2*x2", "0", "0"}) && top == field(names, {"2", "0", "0"});
  const auto r = problem_order(sys);
  const bool ok = chain && r.found && r.k == 4 && r.q == Rational(2);
  return {ok, "ad_f^3 g = " + ad3.to_text() + ", [g, ad_f^3 g] = " + top.to_text() + ", k = " + std::to_string(r.k) +
                  ", q = " + r.q.str()};
}

// 3
Outcome half_integer() {
  const auto r = problem_order(testing::half_integer_witness());
  return {r.found && r.k == 1 && r.q == Rational(1, 2), "k = " + std::to_string(r.k) + ", q = " + r.q.str()};
}

// 4
Outcome parity_suite() {
  std::mt19937_64 rng(1);
  int found = 0;
  int odd = 0;
  int truncated = 0;
  std::map<int, int> histogram;
  for (int i = 0; i < 100; ++i) {
    const auto sys = testing::random_single_input_system(rng);
    const auto r = problem_order(sys, 8, ZeroTestPolicy{}.derive({static_cast<std::uint64_t>(i)}));
    if (!r.found) {
      ++truncated;
      continue;
    }
    ++found;
    ++histogram[r.k];
    if (r.k % 2 != 0) ++odd;
  }
  std::string hist;
  for (const auto& [k, n] : histogram) {
    hist += (hist.empty() ? "k=" : ", k=") + std::to_string(k) + ": " + std::to_string(n);
  }
  return {odd == 0 && found > 0, std::to_string(found) + " found (" + hist + "), " + std::to_string(truncated) +
                                     " truncated at k_max = 8, " + std::to_string(odd) + " odd"};
}

// 5
Outcome identity_suite() {
  int checks = 0;
  int failures = 0;
  const auto fuller = verify_bracket_identities(testing::fuller());
  checks += static_cast<int>(fuller.checks.size());
  for (const auto& c : fuller.checks) failures += c.passed ? 0 : 1;
  const bool fuller_ok = fuller.k_star == 3 && fuller.all_passed();

  std::mt19937_64 rng(5);
  int accepted = 0;
  int draws = 0;
  std::map<int, int> k_stars;
  while (accepted < 25 && draws < 5000) {
    ++draws;
    const auto sys = testing::random_single_input_system(rng);
    const auto r = verify_bracket_identities(sys, ZeroTestPolicy{}.derive({static_cast<std::uint64_t>(draws)}));
    if (r.capped || r.k_star < 2) continue;
    ++accepted;
    ++k_stars[r.k_star];
    checks += static_cast<int>(r.checks.size());
    for (const auto& c : r.checks) failures += c.passed ? 0 : 1;
  }
  std::string ks;
  for (const auto& [k, n] : k_stars) {
    ks += (ks.empty() ? "k*=" : ", k*=") + std::to_string(k) + ": " + std::to_string(n);
  }
  return {fuller_ok && accepted == 25 && failures == 0,
          "Fuller k* = " + std::to_string(fuller.k_star) + " plus " + std::to_string(accepted) + " random systems (" +
              ks + ", " + std::to_string(draws) + " draws); " + std::to_string(checks) + " checks, " +
              std::to_string(failures) + " failures"};
}

// 6
Outcome lie_algebra_laws() {
  std::mt19937_64 rng(6);
  const std::vector<std::string> vars{"x1", "x2", "x3"};
  std::uniform_int_distribution<int> scalar(-3, 3);
  int symbolic_failures = 0;
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const auto a = testing::random_polynomial_field(rng, vars, 2, 2, 0.3);
    const auto b = testing::random_polynomial_field(rng, vars, 2, 2, 0.3);
    const auto c = testing::random_polynomial_field(rng, vars, 2, 2, 0.3);
    const Number alpha(scalar(rng));
    const Number beta(scalar(rng));

    const auto ab = lie_bracket(a, b);
    const auto ba = lie_bracket(b, a);
    const auto lin_left = lie_bracket(alpha * a + beta * b, c);
    const auto ac = lie_bracket(a, c);
    const auto bc = lie_bracket(b, c);
    const auto lin_right = lie_bracket(c, alpha * a + beta * b);
    const auto ca = lie_bracket(c, a);
    const auto cb = lie_bracket(c, b);
    const auto j1 = lie_bracket(a, bc);
    const auto j2 = lie_bracket(b, ca);
    const auto j3 = lie_bracket(c, ab);

    const std::vector<VectorField> identities{ab + ba, lin_left - (alpha * ac + beta * bc),
                                              lin_right - (alpha * ca + beta * cb), j1 + j2 + j3};
    for (std::size_t k = 0; k < identities.size(); ++k) {
      if (!vf_is_zero(identities[k], ZeroTestPolicy{}.derive({static_cast<std::uint64_t>(t), k})).zero) {
        ++symbolic_failures;
      }
    }

    // Numeric residuals combine separately evaluated brackets.
    const double al = alpha.to_double();
    const double be = beta.to_double();
    const CompiledField nab(ab), nba(ba), nll(lin_left), nac(ac), nbc(bc), nlr(lin_right), nca(ca), ncb(cb),
        nj1(j1), nj2(j2), nj3(j3);
    for (int s = 0; s < 32; ++s) {
      const auto x = uniform_vector(rng, 3);
      const auto vab = nab(x), vba = nba(x), vll = nll(x), vac = nac(x), vbc = nbc(x), vlr = nlr(x), vca = nca(x),
                 vcb = ncb(x), v1 = nj1(x), v2 = nj2(x), v3 = nj3(x);
      for (std::size_t i = 0; i < 3; ++i) {
        worst = std::max(worst, std::abs(vab[i] + vba[i]));
        worst = std::max(worst, std::abs(vll[i] - al * vac[i] - be * vbc[i]));
        worst = std::max(worst, std::abs(vlr[i] - al * vca[i] - be * vcb[i]));
        worst = std::max(worst, std::abs(v1[i] + v2[i] + v3[i]));
      }
    }
  }
  return {symbolic_failures == 0 && worst < 1e-8,
          "50 triples, " + std::to_string(symbolic_failures) + " symbolic failures, max numeric residual " +
              fmt("%.3g", worst) + " over 32 points per identity"};
}

// 7
Outcome pairing_derivative() {
  const auto sys = testing::counterexample();
  std::mt19937_64 rng(7);
  const auto x0 = uniform_vector(rng, 6);
  const auto p0 = uniform_vector(rng, 6);
  const std::vector<double> u{0.6, -0.3, 0.8};
  const auto coarse = integrate_extremal(sys, fixed(x0, p0, u, 1e-3));
  const auto fine = integrate_extremal(sys, fixed(x0, p0, u, 5e-4));
  std::vector<std::pair<std::string, VectorField>> probes{
      {"g1", sys.input(0)}, {"g2", sys.input(1)}, {"g3", sys.input(2)}, {"f", sys.drift()}};
  bool ok = !coarse.aborted() && !fine.aborted();
  double worst = 0.0;
  double min_ratio = 1e300;
  for (const auto& [name, h] : probes) {
    const double rc = check_pairing_derivative(sys, coarse, h);
    const double rf = check_pairing_derivative(sys, fine, h);
    worst = std::max(worst, rc);
    const double ratio = rf > 0.0 ? rc / rf : 1e300;
    min_ratio = std::min(min_ratio, ratio);
    ok = ok && rc < 1e-4 && ratio >= 3.0;
  }
  return {ok, "max residual " + fmt("%.3g", worst) + " at h = 1e-3, smallest reduction on halving " +
                  fmt("%.2f", min_ratio) + "x"};
}

// 8
Outcome hamiltonian_conservation() {
  struct Case {
    ControlSystem sys;
    PiecewiseControl policy;
  };
  std::mt19937_64 rng(8);
  std::vector<Case> cases;
  cases.push_back({testing::counterexample(),
                   PiecewiseControl{{{0.0, {1.0, -1.0, 0.5}}, {0.25, {-1.0, 1.0, -0.5}}, {0.7, {0.3, 0.3, 1.0}}}}});
  cases.push_back({testing::fuller(), PiecewiseControl{{{0.0, {1.0}}, {0.4, {-1.0}}, {0.8, {1.0}}}}});
  cases.push_back({testing::double_integrator(), PiecewiseControl{{{0.0, {-1.0}}, {0.5, {1.0}}}}});
  double worst = 0.0;
  int switches = 0;
  bool ok = true;
  for (auto& c : cases) {
    SimConfig cfg;
    cfg.initial_state = uniform_vector(rng, c.sys.dimension());
    cfg.initial_adjoint = uniform_vector(rng, c.sys.dimension());
    cfg.policy = c.policy;
    const auto traj = integrate_extremal(c.sys, cfg);
    ok = ok && !traj.aborted();
    std::size_t start = 0;
    for (std::size_t k = 1; k < traj.samples.size(); ++k) {
      if (traj.samples[k].u != traj.samples[k - 1].u) {
        start = k;
        ++switches;
      }
      worst = std::max(worst, std::abs(traj.samples[k].H - traj.samples[start].H));
    }
  }
  return {ok && worst < 1e-6, "3 systems, " + std::to_string(switches) + " switches, max |H(t) - H(t_switch)| = " +
                                  fmt("%.3g", worst)};
}

// 9
Outcome integrator_oracles() {
  const auto sys = testing::double_integrator();
  const auto a = integrate_extremal(sys, fixed({0.0, 0.0}, {0.4, -0.9}, {1.0}, 1e-3));
  const auto b = integrate_extremal(sys, fixed({0.3, -0.2}, {1.0, 0.0}, {0.0}, 1e-3));
  const double ex = std::abs(a.samples.back().x[0] - 0.5);
  const double ep = std::max(std::abs(b.samples.back().p[0] - 1.0), std::abs(b.samples.back().p[1] + 1.0));
  return {ex < 1e-8 && ep < 1e-8 && a.samples.back().t == 1.0,
          "|x1(1) - 1/2| = " + fmt("%.3g", ex) + ", |p(1) - (1, -1)| = " + fmt("%.3g", ep)};
}

// 10
Outcome parser_round_trip() {
  std::mt19937_64 rng(10);
  const std::vector<std::string> vars{"x1", "x2", "theta"};
  int survived = 0;
  for (int i = 0; i < 1000; ++i) {
    const Expr e = testing::random_tree(rng, vars, 3);
    try {
      if (simplify(parse(to_text(e), vars)) == simplify(e)) ++survived;
    } catch (const Error&) {
    }
  }
  struct Case {
    const char* text;
    std::size_t position;
  };
  int diagnosed = 0;
  const std::vector<Case> bad{{"x1 +", 4},          {"(x1", 3},   {"x1 ^ x2", 5}, {"x1 )", 3},
                              {"2 ** x1", 3},       {"", 0},      {"x1 + zeta", 5}, {"sin x1", 0},
                              {"cos(x1, x2)", 0},   {"x1^2^3", 4}};
  for (const auto& c : bad) {
    try {
      parse(c.text, vars);
    } catch (const ParseError& err) {
      if (err.position() == c.position) ++diagnosed;
    }
  }
  return {survived == 1000 && diagnosed == static_cast<int>(bad.size()),
          std::to_string(survived) + "/1000 trees round-trip, " + std::to_string(diagnosed) + "/" +
              std::to_string(bad.size()) + " malformed inputs diagnosed at the expected position"};
}

// 11
Outcome local_order() {
  const auto sys = testing::counterexample();
  std::mt19937_64 rng(11);
  const LocalOrderEvaluator eval(sys);
  int three = 0;
  int below = 0;
  for (int i = 0; i < 100; ++i) {
    const auto x = uniform_vector(rng, 6);
    const auto p = uniform_vector(rng, 6);
    const auto r = eval.at(x, p, kDefaultMaxLevel, 1e-9);
    if (r.found && r.k_local == 3) ++three;
    if (r.found && r.k_local < 3) ++below;
  }

  // x = 0, u = 0 with only the cost adjoint nonzero keeps every phi_i at zero.
  const auto ext = extend_with_cost(testing::counterexample_with_cost());
  SimConfig c;
  c.initial_state.assign(7, 0.0);
  c.initial_adjoint.assign(7, 0.0);
  const auto traj = integrate_extremal(ext, c);
  const LocalOrderEvaluator arc_eval(ext);
  double b3 = 0.0;
  for (const auto& s : traj.samples) {
    for (const auto& row : arc_eval.b_matrix(3, s.x, s.p)) {
      for (double v : row) b3 = std::max(b3, std::abs(v));
    }
  }
  const auto arc = local_order_on_arc(ext, traj, {0.0, c.horizon});
  const bool arc_ok = !traj.aborted() && b3 < 1e-9 && (!arc.consensus || *arc.consensus > 3);
  const std::string consensus = arc.consensus ? std::to_string(*arc.consensus) : "none";
  return {three >= 95 && below == 0 && arc_ok,
          std::to_string(three) + "/100 generic draws give k_local = 3; stay-at-origin arc max |B_3| = " +
              fmt("%.3g", b3) + ", arc consensus k_local = " + consensus};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "counterexample order", 5.0, counterexample_order},
      {2, "Fuller order", 5.0, fuller_order},
      {3, "half-integer order", 0.0, half_integer},
      {4, "single-input parity", 60.0, parity_suite},
      {5, "bracket identities", 0.0, identity_suite},
      {6, "Lie algebra laws", 0.0, lie_algebra_laws},
      {7, "adjoint pairing derivative", 0.0, pairing_derivative},
      {8, "Hamiltonian conservation", 0.0, hamiltonian_conservation},
      {9, "integrator oracles", 0.0, integrator_oracles},
      {10, "parser round trip", 0.0, parser_round_trip},
      {11, "local vs problem order", 0.0, local_order},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0.0 && secs >= c.limit_seconds) {
      o.pass = false;
      o.detail += "; over the " + fmt("%.0f", c.limit_seconds) + " s limit";
    }
    if (!o.pass) ++failed;
    std::printf("%s  %2d  %-27s %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
