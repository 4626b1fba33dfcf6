#include "lieorder/cli.hpp"

#include "lieorder/control_system.hpp"
#include "lieorder/errors.hpp"
#include "lieorder/extremal_sim.hpp"
#include "lieorder/order_analysis.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace lieorder::cli {

namespace {

using nlohmann::json;

struct Options {
  std::string file;
  bool extend_cost = false;
  bool json_output = false;
  std::string out;

  int k_max = kDefaultMaxLevel;
  int zero_samples = 32;
  double zero_box = 1.0;
  double zero_tol = 1e-9;
  std::uint64_t seed = ZeroTestPolicy{}.seed;

  int depth = 3;
  int identity_depth = kDefaultIdentityDepth;

  double horizon = 1.0;
  double step = 1e-3;
  int lambda = 1;
  std::string x0;
  std::string p0;
  std::string policy = "bang";
  double deadband = 0.0;
  double singular_tol = 1e-6;
  double singular_min = 0.0;

  std::string suite;
  double tolerance = -1.0;
  std::string fault;
};

// Carries an exit code out of a command body.
struct Exit {
  int code;
};

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string format_vector(const std::vector<double>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_double(v[i]);
  return s + ")";
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json field_json(const VectorField& f) {
  json comps = json::array();
  for (const auto& c : f.components()) comps.push_back(to_text(c));
  return comps;
}

json binding_json(const Binding& b) {
  json out = json::object();
  for (const auto& [name, value] : b) out[name] = value;
  return out;
}

std::string binding_text(const json& b) {
  std::string s;
  for (const auto& [name, value] : b.items()) s += (s.empty() ? "" : ", ") + name + " = " + format_double(value);
  return "(" + s + ")";
}

ZeroTestPolicy zero_policy(const Options& o) {
  ZeroTestPolicy p;
  p.sample_count = o.zero_samples;
  p.box_halfwidth = o.zero_box;
  p.tolerance = o.zero_tol;
  p.seed = o.seed;
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return p;
}

std::string ad_name(std::size_t i, int k) {
  if (k == 0) return "g" + std::to_string(i + 1);
  return "ad_f^" + std::to_string(k) + " g" + std::to_string(i + 1);
}

std::string b_name(std::size_t i, std::size_t j, int k) {
  return "[g" + std::to_string(j + 1) + ", " + ad_name(i, k - 1) + "]";
}

class Runner {
 public:
  Runner(std::string command, Options opts, std::ostream& out, std::ostream& err)
      : command_(std::move(command)), o_(std::move(opts)), out_(out), err_(err) {}

  int run() {
    try {
      if (command_ == "order") return order();
      if (command_ == "brackets") return brackets();
      if (command_ == "simulate") return simulate();
      if (command_ == "verify") return verify();
      if (command_ == "local-order") return local_order();
      err_ << "unknown command '" << command_ << "'\n";
      return kInputError;
    } catch (const Exit& e) {
      return e.code;
    } catch (const Error& e) {
      err_ << "error: " << e.what() << '\n';
      return kInputError;
    } catch (const std::exception& e) {
      err_ << "error: " << e.what() << '\n';
      return kInputError;
    }
  }

 private:
  // Loads, optionally extends and validates the system. Exits with 1 on
  // load errors and 2 on validation errors.
  ControlSystem load(bool needs_extension, double horizon = 1.0) {
    std::optional<ControlSystem> sys;
    try {
      sys = load_system_file(o_.file);
    } catch (const Error& e) {
      err_ << "error: " << o_.file << ": " << e.what() << '\n';
      throw Exit{kInputError};
    }
    const auto report = validate(*sys, horizon);
    for (const auto& f : report.findings) {
      err_ << (f.severity == Severity::Error ? "error" : "warning") << ": " << f.location << ": " << f.message
           << '\n';
    }
    if (!report.ok()) throw Exit{kValidationError};
    if (o_.extend_cost) {
      if (!sys->has_cost()) {
        err_ << "error: --extend-cost given but the system has no running cost\n";
        throw Exit{kValidationError};
      }
      sys = extend_with_cost(*sys);
    } else if (needs_extension && sys->has_cost()) {
      err_ << "error: the system has a running cost; rerun with --extend-cost\n";
      throw Exit{kValidationError};
    }
    return *sys;
  }

  json manifest(json options) const {
    options["extend_cost"] = o_.extend_cost;
    return {{"command", command_},
            {"input", o_.file},
            {"options", std::move(options)},
            {"version", kVersion},
            {"timestamp", timestamp()}};
  }

  json zero_options() const {
    return {{"zero_samples", o_.zero_samples}, {"zero_box", o_.zero_box}, {"zero_tol", o_.zero_tol}, {"seed", o_.seed}};
  }

  void emit(const json& manifest, const json& result, const std::string& human) {
    std::ofstream file;
    std::ostream* dest = &out_;
    if (!o_.out.empty() && command_ != "simulate") {
      file.open(o_.out);
      if (!file) {
        err_ << "error: cannot write " << o_.out << '\n';
        throw Exit{kInputError};
      }
      dest = &file;
    }
    if (o_.json_output) {
      *dest << json{{"manifest", manifest}, {"result", result}}.dump(2) << '\n';
    } else {
      *dest << human;
    }
  }

  static std::string system_line(const ControlSystem& sys) {
    std::string s = sys.label().empty() ? "system" : sys.label();
    const std::size_t m = sys.input_count();
    return s + ": " + std::to_string(sys.dimension()) + " states, " + std::to_string(m) +
           (m == 1 ? " input\n" : " inputs\n");
  }

  int order() {
    const auto sys = load(true);
    const auto policy = zero_policy(o_);
    if (o_.k_max < 1) throw ConfigError("--k-max must be at least 1");
    const auto r = problem_order(sys, o_.k_max, policy);

    json levels = json::array();
    std::ostringstream table;
    table << "level  nonzero  witness\n";
    for (const auto& ev : r.evidence) {
      std::size_t nonzero = 0;
      std::size_t total = 0;
      for (const auto& row : ev.verdicts) {
        for (const auto& v : row) {
          ++total;
          if (!v.zero) ++nonzero;
        }
      }
      json level{{"level", ev.level}, {"brackets", total}, {"nonzero", nonzero}};
      char head[64];
      std::snprintf(head, sizeof head, "%5d  %3zu/%-3zu  ", ev.level, nonzero, total);
      table << head;
      if (const auto where = ev.first_nonzero()) {
        const auto& v = ev.verdicts[where->first][where->second];
        const std::string name = b_name(where->first, where->second, ev.level);
        level["first_nonzero"] = {{"bracket", name},
                                  {"i", where->first + 1},
                                  {"j", where->second + 1},
                                  {"component", v.component + 1},
                                  {"value", v.value},
                                  {"witness", binding_json(v.witness)}};
        table << name << ", component " << v.component + 1 << " = " << format_double(v.value);
        if (!v.witness.empty()) table << " at " << binding_text(binding_json(v.witness));
      } else {
        table << "all zero";
      }
      table << '\n';
      levels.push_back(std::move(level));
    }

    json result{{"found", r.found}, {"levels", levels}, {"system", sys.label()}, {"states", sys.dimension()},
                {"inputs", sys.input_count()}};
    std::ostringstream human;
    if (r.found) {
      result["k"] = r.k;
      result["q"] = r.q.str();
      human << "k = " << r.k << ", q = " << r.q.str() << '\n';
    } else {
      result["truncated_at"] = *r.truncated_at;
      human << "order not found up to k = " << *r.truncated_at << '\n';
    }
    human << system_line(sys) << table.str();
    auto opts = zero_options();
    opts["k_max"] = o_.k_max;
    emit(manifest(opts), result, human.str());
    return r.found ? kOk : kTruncated;
  }

  int brackets() {
    const auto sys = load(false);
    if (o_.depth < 0) throw ConfigError("--depth must be non-negative");
    const BracketTower tower(sys);
    json entries = json::array();
    std::ostringstream human;
    for (int k = 0; k <= o_.depth; ++k) {
      for (std::size_t i = 0; i < sys.input_count(); ++i) {
        const auto a = tower.ad(i, k);
        entries.push_back({{"k", k}, {"i", i + 1}, {"name", ad_name(i, k)}, {"field", field_json(a)}});
        human << ad_name(i, k) << " = " << a.to_text() << '\n';
        if (k == 0) continue;
        for (std::size_t j = 0; j < sys.input_count(); ++j) {
          const auto b = tower.b_field(i, j, k);
          entries.push_back(
              {{"k", k}, {"i", i + 1}, {"j", j + 1}, {"name", b_name(i, j, k)}, {"field", field_json(b)}});
          human << b_name(i, j, k) << " = " << b.to_text() << '\n';
        }
      }
    }
    json result{{"states", sys.state_names()}, {"brackets", entries}};
    emit(manifest({{"depth", o_.depth}}), result, human.str());
    return kOk;
  }

  ControlPolicy parse_policy(std::size_t m) const {
    const std::string& p = o_.policy;
    if (p == "bang") return BangBang{o_.deadband};
    if (p.rfind("fixed:", 0) == 0) return FixedControl{parse_vector(p.substr(6))};
    if (p.rfind("piecewise:", 0) == 0) {
      const std::string path = p.substr(10);
      std::ifstream in(path);
      if (!in) throw ConfigError("cannot open piecewise control file " + path);
      PiecewiseControl pw;
      std::string line;
      int number = 0;
      while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<double> row;
        try {
          row = parse_vector(line);
        } catch (const ConfigError& e) {
          throw ConfigError(path + ":" + std::to_string(number) + ": " + e.what());
        }
        if (row.size() != m + 1) {
          throw ConfigError(path + ":" + std::to_string(number) + ": expected t and " + std::to_string(m) +
                            " controls");
        }
        pw.table.emplace_back(row[0], std::vector<double>(row.begin() + 1, row.end()));
      }
      return pw;
    }
    throw ConfigError("unknown policy '" + p + "'; expected bang, fixed:u1,..,um or piecewise:FILE");
  }

  SimConfig sim_config(const ControlSystem& sys) const {
    SimConfig c;
    const std::size_t n = sys.dimension();
    c.initial_state = o_.x0.empty() ? std::vector<double>(n, 0.0) : parse_vector(o_.x0);
    c.initial_adjoint = o_.p0.empty() ? std::vector<double>(n, 1.0) : parse_vector(o_.p0);
    c.lambda = o_.lambda;
    c.horizon = o_.horizon;
    c.step = o_.step;
    c.policy = parse_policy(sys.input_count());
    c.singular_tolerance = o_.singular_tol;
    if (o_.singular_min > 0.0) c.singular_min_length = o_.singular_min;
    c.validate(sys);
    return c;
  }

  json sim_options(const SimConfig& c) const {
    return {{"horizon", c.horizon},
            {"step", c.step},
            {"lambda", c.lambda},
            {"x0", c.initial_state},
            {"p0", c.initial_adjoint},
            {"policy", o_.policy},
            {"deadband", o_.deadband},
            {"singular_tol", c.singular_tolerance},
            {"singular_min", c.min_length()}};
  }

  int simulate() {
    // Reject bad flags before touching the file so step 0 is an input error.
    if (!(o_.step > 0.0)) throw ConfigError("--step must be positive");
    if (!(o_.horizon >= o_.step)) throw ConfigError("--horizon must be at least one step");
    const auto sys = load(true, o_.horizon);
    const auto config = sim_config(sys);
    const auto traj = integrate_extremal(sys, config);

    if (!o_.out.empty()) {
      std::ofstream file(o_.out);
      if (!file) {
        err_ << "error: cannot write " << o_.out << '\n';
        return kInputError;
      }
      write_csv(traj, file);
    }

    json result{{"samples", traj.samples.size()}, {"aborted", traj.aborted()}};
    std::ostringstream human;
    human << system_line(sys);
    if (traj.aborted()) {
      result["abort_reason"] = traj.abort_reason;
      result["abort_time"] = traj.abort_time;
      human << "aborted: " << traj.abort_reason << '\n';
    }
    if (!traj.samples.empty()) {
      const auto& first = traj.samples.front();
      const auto& last = traj.samples.back();
      result["final"] = {{"t", last.t}, {"x", last.x}, {"p", last.p}, {"u", last.u}, {"H", last.H}};
      result["H_drift"] = last.H - first.H;
      human << "samples: " << traj.samples.size() << ", final t = " << format_double(last.t) << '\n';
      human << "final x = " << format_vector(last.x) << '\n';
      human << "final p = " << format_vector(last.p) << '\n';
      human << "H drift: " << format_double(last.H - first.H) << '\n';
    }
    json singular = json::array();
    const auto intervals = detect_singular_intervals(traj, config);
    for (std::size_t i = 0; i < intervals.size(); ++i) {
      json list = json::array();
      human << "singular intervals u" << i + 1 << ":";
      if (intervals[i].empty()) human << " none";
      for (const auto& iv : intervals[i]) {
        list.push_back({iv.start, iv.end});
        human << " [" << format_double(iv.start) << ", " << format_double(iv.end) << "]";
      }
      human << '\n';
      singular.push_back(std::move(list));
    }
    result["singular_intervals"] = singular;
    if (!o_.out.empty()) human << "trajectory written to " << o_.out << '\n';

    auto m = manifest(sim_options(config));
    m["output"] = o_.out;
    if (traj.aborted()) m["aborted"] = true;
    emit(m, result, human.str());
    return traj.aborted() ? kDivergence : kOk;
  }

  BracketFn fault_bracket() const {
    if (o_.fault.empty()) return {};
    if (o_.fault != "bracket-sign") throw ConfigError("unknown fault '" + o_.fault + "'");
    // (Db) a + (Da) b: the second term of the bracket with its sign flipped.
    return [](const VectorField& a, const VectorField& b) {
      const ExprMatrix da = jacobian(a);
      const ExprMatrix db = jacobian(b);
      std::vector<Expr> comps;
      for (std::size_t i = 0; i < a.dimension(); ++i) {
        std::vector<Expr> terms;
        for (std::size_t j = 0; j < a.dimension(); ++j) {
          terms.push_back(db(i, j) * a[j]);
          terms.push_back(da(i, j) * b[j]);
        }
        comps.push_back(simplify(Expr::sum(std::move(terms))));
      }
      return VectorField(a.state_names(), std::move(comps));
    };
  }

  int verify() {
    const std::string& s = o_.suite;
    if (s != "parity" && s != "identities" && s != "lemma1" && s != "all") {
      throw ConfigError("unknown suite '" + s + "'; expected parity, identities, lemma1 or all");
    }
    const auto bracket = fault_bracket();
    const auto sys = load(true, o_.horizon);
    const auto policy = zero_policy(o_);
    const std::size_t m = sys.input_count();

    json checks = json::array();
    std::ostringstream human;
    human << system_line(sys);
    bool failed = false;
    auto record = [&](const std::string& name, const std::string& status, const std::string& detail, json extra) {
      extra["name"] = name;
      extra["status"] = status;
      extra["detail"] = detail;
      checks.push_back(std::move(extra));
      char head[48];
      std::snprintf(head, sizeof head, "%-11s %-8s", name.c_str(), status.c_str());
      human << head << detail << '\n';
      if (status == "FAIL") failed = true;
    };

    if (s == "parity" || s == "all") {
      if (m != 1) {
        record("parity", "SKIPPED", "(m = " + std::to_string(m) + ")", json::object());
      } else {
        const auto c = verify_single_input_parity(sys, o_.k_max, policy);
        if (!c.applicable) {
          record("parity", "SKIPPED", "(order not found up to k = " + std::to_string(o_.k_max) + ")",
                 json::object());
        } else {
          const std::string detail =
              "(k = " + std::to_string(c.report.k) + (c.k_even ? " even" : " odd") + ")";
          record("parity", c.k_even ? "PASS" : "FAIL", detail, {{"k", c.report.k}});
        }
      }
    }

    if (s == "identities" || s == "all") {
      if (m != 1) {
        record("identities", "SKIPPED", "(m = " + std::to_string(m) + ")", json::object());
      } else {
        const auto r = verify_bracket_identities(sys, policy, o_.identity_depth, bracket);
        json failures = json::array();
        std::size_t passed = 0;
        for (const auto& c : r.checks) {
          if (c.passed) {
            ++passed;
          } else {
            failures.push_back({{"kind", to_string(c.kind)}, {"j", c.j}, {"l", c.l}, {"identity", c.description}});
          }
        }
        std::string detail = "(k* = " + std::to_string(r.k_star) + (r.capped ? ", capped" : "") + ", " +
                             std::to_string(passed) + "/" + std::to_string(r.checks.size()) + " checks)";
        if (!failures.empty()) detail += ", first failure: " + failures[0]["identity"].get<std::string>();
        record("identities", r.all_passed() ? "PASS" : "FAIL", detail,
               {{"k_star", r.k_star}, {"capped", r.capped}, {"checks", r.checks.size()}, {"failures", failures}});
      }
    }

    if (s == "lemma1" || s == "all") {
      const double tol = o_.tolerance > 0.0 ? o_.tolerance : 1e-4;
      std::mt19937_64 rng(policy.derive({0x6c656d6d61ULL}).seed);
      SimConfig c;
      const std::size_t n = sys.dimension();
      for (std::size_t i = 0; i < n; ++i) c.initial_state.push_back(uniform_from_bits(rng(), -1.0, 1.0));
      for (std::size_t i = 0; i < n; ++i) c.initial_adjoint.push_back(uniform_from_bits(rng(), -1.0, 1.0));
      c.policy = FixedControl{std::vector<double>(m, 0.5)};
      c.horizon = o_.horizon;
      c.step = o_.step;
      c.validate(sys);
      const auto traj = integrate_extremal(sys, c);
      if (traj.aborted() || traj.samples.size() < 3) {
        record("lemma1", "FAIL", "(integration aborted: " + traj.abort_reason + ")", json::object());
      } else {
        std::vector<std::pair<std::string, VectorField>> probes;
        for (std::size_t i = 0; i < m; ++i) probes.emplace_back("g" + std::to_string(i + 1), sys.input(i));
        probes.emplace_back("f", sys.drift());
        json residuals = json::object();
        double worst = 0.0;
        for (const auto& [name, h] : probes) {
          const double r = check_pairing_derivative(sys, traj, h);
          residuals[name] = r;
          worst = std::max(worst, r);
        }
        const std::string detail = "(max residual " + format_double(worst) + " over " +
                                   std::to_string(probes.size()) + " fields, tolerance " + format_double(tol) + ")";
        record("lemma1", worst < tol ? "PASS" : "FAIL", detail,
               {{"residuals", residuals}, {"tolerance", tol}, {"x0", c.initial_state}, {"p0", c.initial_adjoint}});
      }
    }

    auto opts = zero_options();
    opts["suite"] = s;
    opts["k_max"] = o_.k_max;
    opts["depth"] = o_.identity_depth;
    opts["horizon"] = o_.horizon;
    opts["step"] = o_.step;
    if (!o_.fault.empty()) opts["inject_fault"] = o_.fault;
    emit(manifest(opts), {{"checks", checks}, {"passed", !failed}}, human.str());
    return failed ? kVerificationFailure : kOk;
  }

  int local_order() {
    const auto sys = load(true);
    if (o_.x0.empty() || o_.p0.empty()) throw ConfigError("local-order needs --x and --p");
    const auto x = parse_vector(o_.x0);
    const auto p = parse_vector(o_.p0);
    if (x.size() != sys.dimension() || p.size() != sys.dimension()) {
      throw ConfigError("expected " + std::to_string(sys.dimension()) + " components for --x and --p, got " +
                        std::to_string(x.size()) + " and " + std::to_string(p.size()));
    }
    if (o_.k_max < 1) throw ConfigError("--k-max must be at least 1");
    const double tol = o_.tolerance > 0.0 ? o_.tolerance : 1e-9;
    const auto r = local_order_at(sys, x, p, o_.k_max, tol);

    json result{{"found", r.found}, {"x", x}, {"p", p}};
    std::ostringstream human;
    if (r.found) {
      result["k_local"] = r.k_local;
      result["B"] = r.b_values;
      result["rank"] = r.rank_estimate;
      human << "k_local = " << r.k_local << '\n' << "B_" << r.k_local << " =\n";
      for (const auto& row : r.b_values) human << "  " << format_vector(row) << '\n';
      human << "rank = " << r.rank_estimate << '\n';
    } else {
      human << "not found up to k_max = " << o_.k_max << '\n';
    }
    emit(manifest({{"k_max", o_.k_max}, {"tolerance", tol}}), result, human.str());
    return r.found ? kOk : kTruncated;
  }

  std::string command_;
  Options o_;
  std::ostream& out_;
  std::ostream& err_;
};

void add_zero_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--zero-samples", o.zero_samples, "Sample points per zero test");
  cmd->add_option("--zero-box", o.zero_box, "Half-width of the sampling box");
  cmd->add_option("--zero-tol", o.zero_tol, "Absolute zero tolerance");
  cmd->add_option("--seed", o.seed, "Zero-test seed");
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("file", o.file, "System document (JSON)")->required();
  cmd->add_flag("--extend-cost", o.extend_cost, "Fold the running cost into a cost state x0 first");
  cmd->add_flag("--json", o.json_output, "Print a JSON report");
  cmd->add_option("--out", o.out, "Output path");
}

void add_sim_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--horizon", o.horizon, "Final time T");
  cmd->add_option("--step", o.step, "Integration step h");
}

}  // namespace

std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> v;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = text.find(',', pos);
    std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    const auto first = item.find_first_not_of(" \t\r");
    const auto last = item.find_last_not_of(" \t\r");
    item = first == std::string::npos ? "" : item.substr(first, last - first + 1);
    if (item.empty()) throw ConfigError("empty entry in vector '" + text + "'");
    char* end = nullptr;
    const double d = std::strtod(item.c_str(), &end);
    if (end != item.c_str() + item.size() || !std::isfinite(d)) {
      throw ConfigError("'" + item + "' is not a decimal number");
    }
    v.push_back(d);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return v;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Intrinsic order of affine optimal control systems", "lieorder"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Options o;

  auto* order = app.add_subcommand("order", "Problem order k and q = k/2");
  add_common(order, o);
  add_zero_options(order, o);
  order->add_option("--k-max", o.k_max, "Highest level searched");

  auto* brackets = app.add_subcommand("brackets", "Print ad_f^k g_i and [g_j, ad_f^{k-1} g_i]");
  add_common(brackets, o);
  brackets->add_option("--depth", o.depth, "Highest k printed");

  auto* simulate = app.add_subcommand("simulate", "Integrate an extremal");
  add_common(simulate, o);
  add_sim_options(simulate, o);
  simulate->add_option("--lambda", o.lambda, "Cost multiplier, 0 or 1");
  simulate->add_option("--x0", o.x0, "Initial state, comma-separated");
  simulate->add_option("--p0", o.p0, "Initial adjoint, comma-separated");
  simulate->add_option("--policy", o.policy, "bang, fixed:u1,..,um or piecewise:FILE");
  simulate->add_option("--deadband", o.deadband, "Bang-bang hold band on |phi|");
  simulate->add_option("--singular-tol", o.singular_tol, "Singular-interval threshold on |phi|");
  simulate->add_option("--singular-min", o.singular_min, "Minimum singular-interval length (default 10 h)");

  auto* verify = app.add_subcommand("verify", "Check parity, bracket identities and the adjoint derivative rule");
  add_common(verify, o);
  add_zero_options(verify, o);
  add_sim_options(verify, o);
  verify->add_option("suite", o.suite, "parity | identities | lemma1 | all")->required();
  verify->add_option("--k-max", o.k_max, "Highest level searched for parity");
  verify->add_option("--depth", o.identity_depth, "Depth cap for k*");
  verify->add_option("--tolerance", o.tolerance, "Residual tolerance for lemma1");
  verify->add_option("--inject-fault", o.fault)->group("");

  auto* local = app.add_subcommand("local-order", "Local order at a point (x, p)");
  add_common(local, o);
  local->add_option("--x,--x0", o.x0, "State, comma-separated")->required();
  local->add_option("--p,--p0", o.p0, "Adjoint, comma-separated")->required();
  local->add_option("--k-max", o.k_max, "Highest level searched");
  local->add_option("--tolerance", o.tolerance, "Threshold on |B| entries");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Error& e) {
    return app.exit(e, out, err) == 0 ? kOk : kInputError;
  }

  const auto* chosen = app.get_subcommands().front();
  return Runner(chosen->get_name(), o, out, err).run();
}

}  // namespace lieorder::cli
