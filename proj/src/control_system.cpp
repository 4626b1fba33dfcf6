#include "lieorder/control_system.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <random>
#include <set>

namespace lieorder {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw DimensionError(message);
}

}  // namespace

ControlSystem::ControlSystem(std::vector<std::string> state_names, VectorField drift,
                             std::vector<VectorField> inputs, std::optional<RunningCost> cost,
                             std::optional<Expr> bound, std::string label, bool cost_extended)
    : state_names_(std::move(state_names)),
      drift_(std::move(drift)),
      inputs_(std::move(inputs)),
      cost_(std::move(cost)),
      bound_(bound ? *bound : Expr::constant(Number(1))),
      label_(std::move(label)),
      cost_extended_(cost_extended) {
  require(!inputs_.empty(), "a control system needs at least one input");
  require(drift_.state_names() == state_names_, "drift field does not match the state list");
  for (std::size_t i = 0; i < inputs_.size(); ++i) {
    require(inputs_[i].state_names() == state_names_,
            "input field " + std::to_string(i + 1) + " does not match the state list");
  }
  if (cost_) {
    require(cost_->g0.size() == inputs_.size(),
            "cost has " + std::to_string(cost_->g0.size()) + " input terms for " +
                std::to_string(inputs_.size()) + " inputs");
  }
  for (const auto& v : variables(bound_)) {
    require(v == kTimeName, "control bound may only depend on 't', found '" + v + "'");
  }
  if (cost_extended_) {
    require(!state_names_.empty() && state_names_.front() == kCostStateName,
            "a cost-extended system must have x0 as its first state");
  }
}

double ControlSystem::bound_at(double t) const {
  return eval(bound_, Binding{{kTimeName, t}});
}

namespace {

const nlohmann::json& member(const nlohmann::json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw SchemaError(std::string("missing field '") + key + "'", where);
  return obj.at(key);
}

std::string as_string(const nlohmann::json& j, const std::string& where) {
  if (!j.is_string()) throw SchemaError("expected an expression string", where);
  return j.get<std::string>();
}

const nlohmann::json& as_array(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaError("expected a list", where);
  return j;
}

Expr parse_at(const std::string& text, std::span<const std::string> vars, const std::string& where) {
  try {
    return parse(text, vars);
  } catch (const ParseError& e) {
    throw SchemaError(std::string("parse error: ") + e.what(), where);
  }
}

std::vector<Expr> parse_list(const nlohmann::json& j, std::span<const std::string> vars,
                             std::size_t expected, const std::string& where, const char* what) {
  as_array(j, where);
  if (j.size() != expected) {
    throw DimensionError(where + ": expected " + std::to_string(expected) + " " + what + ", got " +
                         std::to_string(j.size()));
  }
  std::vector<Expr> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string loc = where + "/" + std::to_string(i);
    out.push_back(parse_at(as_string(j[i], loc), vars, loc));
  }
  return out;
}

}  // namespace

ControlSystem load_system(const nlohmann::json& doc) {
  if (!doc.is_object()) throw SchemaError("system document must be an object", "/");
  std::vector<std::string> states;
  for (const auto& [i, s] : as_array(member(doc, "states", "/"), "/states").items()) {
    if (!s.is_string()) throw SchemaError("state names must be strings", "/states/" + i);
    states.push_back(s.get<std::string>());
  }
  if (states.empty()) throw SchemaError("at least one state is required", "/states");
  const auto& inputs_json = member(doc, "inputs", "/");
  if (!inputs_json.is_number_integer() || inputs_json.get<long long>() < 1) {
    throw SchemaError("inputs must be a positive integer", "/inputs");
  }
  const auto m = static_cast<std::size_t>(inputs_json.get<long long>());
  const std::size_t n = states.size();

  VectorField drift(states, parse_list(member(doc, "f", "/"), states, n, "/f", "drift components"));

  const auto& g_json = as_array(member(doc, "g", "/"), "/g");
  if (g_json.size() != m) {
    throw DimensionError("/g: expected " + std::to_string(m) + " input fields, got " +
                         std::to_string(g_json.size()));
  }
  std::vector<VectorField> inputs;
  for (std::size_t i = 0; i < m; ++i) {
    const std::string loc = "/g/" + std::to_string(i);
    inputs.emplace_back(states, parse_list(g_json[i], states, n, loc, "components"));
  }

  std::optional<RunningCost> cost;
  if (doc.contains("cost") && !doc.at("cost").is_null()) {
    const auto& c = doc.at("cost");
    if (!c.is_object()) throw SchemaError("cost must be an object", "/cost");
    RunningCost rc;
    rc.f0 = parse_at(as_string(member(c, "f0", "/cost"), "/cost/f0"), states, "/cost/f0");
    if (c.contains("g0")) {
      rc.g0 = parse_list(c.at("g0"), states, m, "/cost/g0", "input cost terms");
    } else {
      rc.g0.assign(m, Expr::constant(Number(0)));
    }
    cost = std::move(rc);
  }

  std::optional<Expr> bound;
  if (doc.contains("K")) {
    const std::vector<std::string> time{ControlSystem::kTimeName};
    bound = parse_at(as_string(doc.at("K"), "/K"), time, "/K");
  }
  std::string label;
  if (doc.contains("label")) {
    if (!doc.at("label").is_string()) throw SchemaError("label must be a string", "/label");
    label = doc.at("label").get<std::string>();
  }
  bool extended = false;
  if (doc.contains("cost_extended")) {
    if (!doc.at("cost_extended").is_boolean()) throw SchemaError("expected a boolean", "/cost_extended");
    extended = doc.at("cost_extended").get<bool>();
  }
  return ControlSystem(std::move(states), std::move(drift), std::move(inputs), std::move(cost),
                       std::move(bound), std::move(label), extended);
}

ControlSystem load_system_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open system file", path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what(), path.string());
  }
  return load_system(doc);
}

nlohmann::json to_document(const ControlSystem& sys) {
  nlohmann::json doc;
  doc["states"] = sys.state_names();
  doc["inputs"] = sys.input_count();
  auto texts = [](std::span<const Expr> es) {
    std::vector<std::string> out;
    for (const auto& e : es) out.push_back(to_text(e));
    return out;
  };
  doc["f"] = texts(sys.drift().components());
  doc["g"] = nlohmann::json::array();
  for (const auto& g : sys.inputs()) doc["g"].push_back(texts(g.components()));
  if (sys.cost()) {
    doc["cost"] = {{"f0", to_text(sys.cost()->f0)}, {"g0", texts(sys.cost()->g0)}};
  }
  doc["K"] = to_text(sys.bound());
  if (!sys.label().empty()) doc["label"] = sys.label();
  if (sys.is_cost_extended()) doc["cost_extended"] = true;
  return doc;
}

ControlSystem extend_with_cost(const ControlSystem& sys) {
  if (!sys.cost()) throw Error("extend_with_cost: system has no running cost");
  const auto& names = sys.state_names();
  if (std::find(names.begin(), names.end(), ControlSystem::kCostStateName) != names.end()) {
    throw Error("extend_with_cost: state name 'x0' is already in use");
  }
  std::vector<std::string> states{ControlSystem::kCostStateName};
  states.insert(states.end(), names.begin(), names.end());

  auto extended = [&](const Expr& head, const VectorField& tail) {
    std::vector<Expr> comps{head};
    comps.insert(comps.end(), tail.components().begin(), tail.components().end());
    return VectorField(states, std::move(comps));
  };
  VectorField drift = extended(sys.cost()->f0, sys.drift());
  std::vector<VectorField> inputs;
  for (std::size_t i = 0; i < sys.input_count(); ++i) inputs.push_back(extended(sys.cost()->g0[i], sys.input(i)));
  std::string label = sys.label().empty() ? "cost-extended" : sys.label() + " (cost-extended)";
  return ControlSystem(std::move(states), std::move(drift), std::move(inputs), std::nullopt, sys.bound(),
                       std::move(label), true);
}

bool ValidationReport::ok() const { return error_count() == 0; }

std::size_t ValidationReport::error_count() const {
  return static_cast<std::size_t>(std::count_if(findings.begin(), findings.end(),
                                                [](const Finding& f) { return f.severity == Severity::Error; }));
}

namespace {

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

}  // namespace

ValidationReport validate(const ControlSystem& sys, double horizon) {
  ValidationReport report;
  auto error = [&](std::string msg, std::string loc) {
    report.findings.push_back({Severity::Error, std::move(msg), std::move(loc)});
  };

  std::set<std::string> seen;
  for (std::size_t i = 0; i < sys.dimension(); ++i) {
    const auto& name = sys.state_names()[i];
    const std::string loc = "/states/" + std::to_string(i);
    if (!seen.insert(name).second) error("duplicate state name '" + name + "'", loc);
    if (!is_identifier(name)) error("state name '" + name + "' is not an identifier", loc);
    if (name == "sin" || name == "cos" || name == "exp" || name == ControlSystem::kTimeName) {
      error("state name '" + name + "' is reserved", loc);
    }
  }
  if (sys.drift().dimension() != sys.dimension()) error("drift dimension mismatch", "/f");
  for (std::size_t i = 0; i < sys.input_count(); ++i) {
    if (sys.input(i).dimension() != sys.dimension()) error("input field dimension mismatch", "/g/" + std::to_string(i));
  }

  if (!(horizon > 0.0)) {
    error("horizon must be positive", "/K");
  } else {
    constexpr int kSamples = 100;
    for (int i = 0; i < kSamples; ++i) {
      const double t = horizon * i / (kSamples - 1);
      double k = 0.0;
      try {
        k = sys.bound_at(t);
      } catch (const EvalError& e) {
        error(std::string("K cannot be evaluated: ") + e.what(), "/K");
        break;
      }
      if (!(k > 0.0)) {
        error("K(t) = " + std::to_string(k) + " is not strictly positive at t = " + std::to_string(t), "/K");
        break;
      }
    }
  }

  // Every expression must be finite somewhere; a few random points are
  // drawn so a singular locus hit by chance is not reported.
  std::vector<std::pair<Expr, std::string>> all;
  for (std::size_t i = 0; i < sys.dimension(); ++i) all.emplace_back(sys.drift()[i], "/f/" + std::to_string(i));
  for (std::size_t j = 0; j < sys.input_count(); ++j) {
    for (std::size_t i = 0; i < sys.dimension(); ++i) {
      all.emplace_back(sys.input(j)[i], "/g/" + std::to_string(j) + "/" + std::to_string(i));
    }
  }
  if (sys.cost()) {
    all.emplace_back(sys.cost()->f0, "/cost/f0");
    for (std::size_t j = 0; j < sys.cost()->g0.size(); ++j) {
      all.emplace_back(sys.cost()->g0[j], "/cost/g0/" + std::to_string(j));
    }
  }
  std::mt19937_64 rng(0x76616c6964617465ULL);
  for (const auto& [e, loc] : all) {
    bool evaluated = false;
    std::string last_error;
    for (int attempt = 0; attempt < 8 && !evaluated; ++attempt) {
      Binding b;
      for (const auto& name : sys.state_names()) b[name] = uniform_from_bits(rng(), -1.0, 1.0);
      try {
        evaluated = std::isfinite(eval(e, b));
        if (!evaluated) last_error = "non-finite value";
      } catch (const EvalError& err) {
        last_error = err.what();
      }
    }
    if (!evaluated) error("expression does not evaluate at random points: " + last_error, loc);
  }
  return report;
}

}  // namespace lieorder
