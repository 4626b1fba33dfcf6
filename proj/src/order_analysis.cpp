#include "lieorder/order_analysis.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <mutex>

namespace lieorder {

namespace {

void require_no_pending_cost(const ControlSystem& sys) {
  if (sys.has_cost()) {
    throw Error("system has a running cost; apply extend_with_cost first to analyze the extended problem");
  }
}

}  // namespace

struct BracketTower::Chain {
  std::mutex mutex;
  std::vector<VectorField> levels;
};

BracketTower::BracketTower(const ControlSystem& sys, BracketFn bracket)
    : sys_(sys), bracket_(bracket ? std::move(bracket) : BracketFn(lie_bracket)) {
  for (const auto& g : sys_.inputs()) {
    auto chain = std::make_unique<Chain>();
    chain->levels.push_back(g.simplified());
    chains_.push_back(std::move(chain));
  }
}

BracketTower::~BracketTower() = default;
BracketTower::BracketTower(BracketTower&&) noexcept = default;

VectorField BracketTower::bracket(const VectorField& a, const VectorField& b) const { return bracket_(a, b); }

VectorField BracketTower::ad(std::size_t i, int k) const {
  if (k < 0) throw Error("bracket level must be non-negative");
  Chain& chain = *chains_.at(i);
  std::lock_guard lock(chain.mutex);
  while (chain.levels.size() <= static_cast<std::size_t>(k)) {
    chain.levels.push_back(bracket_(sys_.drift(), chain.levels.back()));
  }
  return chain.levels[static_cast<std::size_t>(k)];
}

VectorField BracketTower::b_field(std::size_t i, std::size_t j, int k) const {
  if (k < 1) throw Error("switching derivative level must be >= 1");
  return bracket_(sys_.input(j), ad(i, k - 1));
}

SwitchingCoefficients BracketTower::coefficients(int k) const {
  if (k < 1) throw Error("switching derivative level must be >= 1");
  SwitchingCoefficients out;
  out.k = k;
  const std::size_t m = input_count();
  out.b_fields.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    out.a_fields.push_back(ad(i, k));
    for (std::size_t j = 0; j < m; ++j) out.b_fields[i].push_back(b_field(i, j, k));
  }
  return out;
}

SwitchingCoefficients switching_coeffs(const ControlSystem& sys, int k) {
  require_no_pending_cost(sys);
  return BracketTower(sys).coefficients(k);
}

bool LevelEvidence::all_zero() const { return !first_nonzero().has_value(); }

std::optional<std::pair<std::size_t, std::size_t>> LevelEvidence::first_nonzero() const {
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    for (std::size_t j = 0; j < verdicts[i].size(); ++j) {
      if (!verdicts[i][j].zero) return std::make_pair(i, j);
    }
  }
  return std::nullopt;
}

OrderReport problem_order(const BracketTower& tower, int k_max, const ZeroTestPolicy& policy) {
  if (k_max < 1) throw Error("k_max must be >= 1");
  require_no_pending_cost(tower.system());
  policy.validate();
  OrderReport report;
  const std::size_t m = tower.input_count();
  for (int level = 1; level <= k_max; ++level) {
    LevelEvidence ev;
    ev.level = level;
    ev.verdicts.assign(m, std::vector<FieldVerdict>(m));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        const auto stream = policy.derive({static_cast<std::uint64_t>(level), i, j});
        ev.verdicts[i][j] = vf_is_zero(tower.b_field(i, j, level), stream);
      }
    }
    const bool nonzero = !ev.all_zero();
    report.evidence.push_back(std::move(ev));
    if (nonzero) {
      report.found = true;
      report.k = level;
      report.q = Rational(level, 2);
      return report;
    }
  }
  report.truncated_at = k_max;
  return report;
}

OrderReport problem_order(const ControlSystem& sys, int k_max, const ZeroTestPolicy& policy) {
  require_no_pending_cost(sys);
  return problem_order(BracketTower(sys), k_max, policy);
}

ParityCheck verify_single_input_parity(const ControlSystem& sys, int k_max, const ZeroTestPolicy& policy) {
  ParityCheck out;
  out.report = problem_order(sys, k_max, policy);
  out.applicable = sys.input_count() == 1 && out.report.found;
  if (out.applicable) {
    out.k_even = out.report.k % 2 == 0;
    out.inconsistent = !out.k_even;
  }
  return out;
}

bool IdentityReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.passed; });
}

std::string to_string(IdentityKind kind) {
  switch (kind) {
    case IdentityKind::Shift: return "shift";
    case IdentityKind::AlternatingSign: return "alternating-sign";
    case IdentityKind::EvenLevelVanishes: return "even-level-vanishes";
  }
  return {};
}

namespace {

std::string ad_text(int k) {
  if (k == 0) return "g";
  return "ad_f^" + std::to_string(k) + " g";
}

std::string bracket_text(int a, int b) { return "[" + ad_text(a) + ", " + ad_text(b) + "]"; }

}  // namespace

IdentityReport verify_bracket_identities(const ControlSystem& sys, const ZeroTestPolicy& policy, int depth_cap,
                                         BracketFn bracket) {
  if (sys.input_count() != 1) throw Error("bracket identities apply to single-input systems only");
  require_no_pending_cost(sys);
  if (depth_cap < 1) throw Error("identity depth cap must be >= 1");
  policy.validate();
  const BracketTower tower(sys, std::move(bracket));
  auto ad = [&](int k) { return tower.ad(0, k); };
  auto br = [&](int a, int b) { return tower.bracket(ad(a), ad(b)); };

  IdentityReport report;
  report.k_star = depth_cap;
  report.capped = true;
  for (int i = 0; i < depth_cap; ++i) {
    if (!vf_is_zero(br(0, i), policy.derive({0xa11, static_cast<std::uint64_t>(i)})).zero) {
      report.k_star = i;
      report.capped = false;
      break;
    }
  }
  const int ks = report.k_star;
  auto record = [&](IdentityKind kind, int j, int l, const VectorField& residual, std::string description) {
    IdentityCheck c;
    c.kind = kind;
    c.j = j;
    c.l = l;
    c.verdict = vf_is_zero(residual, policy.derive({static_cast<std::uint64_t>(kind) + 0xb00,
                                                     static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(l)}));
    c.passed = c.verdict.zero;
    c.description = std::move(description);
    report.checks.push_back(std::move(c));
  };

  for (int j = 1; j <= ks; ++j) {
    for (int l = 0; l <= ks - (j + 1); ++l) {
      record(IdentityKind::Shift, j, l, br(j, l) + br(j - 1, l + 1),
             bracket_text(j, l) + " + " + bracket_text(j - 1, l + 1) + " = 0");
    }
  }
  const VectorField top = br(0, ks);
  for (int j = 0; j <= ks; ++j) {
    const Number sign(j % 2 == 0 ? 1 : -1);
    record(IdentityKind::AlternatingSign, j, ks - j, top - sign * br(j, ks - j),
           bracket_text(0, ks) + " = " + (j % 2 == 0 ? "+" : "-") + bracket_text(j, ks - j));
  }
  if (ks % 2 == 0) {
    record(IdentityKind::EvenLevelVanishes, ks, 0, top, bracket_text(0, ks) + " = 0 (k* even)");
  }
  return report;
}

LocalOrderEvaluator::LocalOrderEvaluator(const ControlSystem& sys) : tower_(sys) { require_no_pending_cost(sys); }

const std::vector<std::vector<CompiledField>>& LocalOrderEvaluator::level(int k) const {
  std::lock_guard lock(mutex_);
  while (compiled_.size() < static_cast<std::size_t>(k)) {
    const int lvl = static_cast<int>(compiled_.size()) + 1;
    const std::size_t m = tower_.input_count();
    std::vector<std::vector<CompiledField>> grid(m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) grid[i].emplace_back(tower_.b_field(i, j, lvl));
    }
    compiled_.push_back(std::move(grid));
  }
  return compiled_[static_cast<std::size_t>(k) - 1];
}

std::vector<std::vector<double>> LocalOrderEvaluator::b_matrix(int lvl, std::span<const double> x,
                                                               std::span<const double> p) const {
  const auto& sys = tower_.system();
  if (x.size() != sys.dimension() || p.size() != sys.dimension()) {
    throw DimensionError("state and adjoint must have " + std::to_string(sys.dimension()) + " entries");
  }
  const auto& grid = level(lvl);
  const std::size_t m = grid.size();
  std::vector<std::vector<double>> out(m, std::vector<double>(m));
  std::vector<double> value(sys.dimension());
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      try {
        grid[i][j](x, value);
      } catch (const EvalError& e) {
        throw EvalError("B_" + std::to_string(lvl) + "[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) +
                        "] = <p, [g" + std::to_string(j + 1) + ", ad_f^" + std::to_string(lvl - 1) + " g" +
                        std::to_string(i + 1) + "]>: " + e.what());
      }
      out[i][j] = dot(p, value);
    }
  }
  return out;
}

LocalOrderResult LocalOrderEvaluator::at(std::span<const double> x, std::span<const double> p, int k_max,
                                         double tolerance) const {
  if (k_max < 1) throw Error("k_max must be >= 1");
  LocalOrderResult out;
  for (int lvl = 1; lvl <= k_max; ++lvl) {
    auto b = b_matrix(lvl, x, p);
    double largest = 0.0;
    for (const auto& row : b) {
      for (const double v : row) largest = std::max(largest, std::abs(v));
    }
    if (largest > tolerance) {
      out.found = true;
      out.k_local = lvl;
      out.rank_estimate = numerical_rank(b, tolerance);
      out.b_values = std::move(b);
      return out;
    }
  }
  return out;
}

LocalOrderResult local_order_at(const ControlSystem& sys, std::span<const double> x, std::span<const double> p,
                                int k_max, double tolerance) {
  return LocalOrderEvaluator(sys).at(x, p, k_max, tolerance);
}

int numerical_rank(const std::vector<std::vector<double>>& m, double tolerance) {
  if (m.empty()) return 0;
  Eigen::MatrixXd a(static_cast<Eigen::Index>(m.size()), static_cast<Eigen::Index>(m.front().size()));
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m[i].size(); ++j) {
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m[i][j];
    }
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= tolerance) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tolerance * s(0)) ++rank;
  }
  return rank;
}

}  // namespace lieorder
