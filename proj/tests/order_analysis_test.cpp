#include "lieorder/order_analysis.hpp"

#include "random_systems.hpp"
#include "systems.hpp"

#include <gtest/gtest.h>

#include <random>

namespace lieorder {
namespace {

VectorField field(const std::vector<std::string>& names, std::vector<std::string> texts) {
  return VectorField::parse(names, texts).simplified();
}

ControlSystem make(std::vector<std::string> names, std::vector<std::string> f,
                   std::vector<std::vector<std::string>> g) {
  std::vector<VectorField> inputs;
  for (auto& gi : g) inputs.push_back(VectorField::parse(names, gi));
  return ControlSystem(names, VectorField::parse(names, f), std::move(inputs));
}

TEST(SwitchingCoeffs, LevelOneIsInputBrackets) {
  const auto sys = testing::half_integer_witness();
  const auto c = switching_coeffs(sys, 1);
  ASSERT_EQ(c.b_fields.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(c.b_fields[i][j], lie_bracket(sys.input(j), sys.input(i)));
  }
  EXPECT_EQ(c.b_fields[1][0], field(sys.state_names(), {"0", "1"}));
  EXPECT_EQ(c.a_fields[0], ad_pow(sys.drift(), sys.input(0), 1));
}

TEST(SwitchingCoeffs, CounterexampleLevelThree) {
  const auto sys = testing::counterexample();
  const auto c = switching_coeffs(sys, 3);
  EXPECT_EQ(c.k, 3);
  // b[1][3] in one-based indexing
  EXPECT_EQ(c.b_fields[0][2], field(sys.state_names(), {"sin(theta)", "cos(theta)", "0", "0", "0", "0"}))
      << c.b_fields[0][2].to_text();
}

TEST(SwitchingCoeffs, FullerLevelFour) {
  const auto sys = testing::fuller();
  const auto c = switching_coeffs(sys, 4);
  EXPECT_EQ(c.b_fields[0][0], field(sys.state_names(), {"2", "0", "0"}));
  EXPECT_EQ(c.a_fields[0], ad_pow(sys.drift(), sys.input(0), 4));
}

TEST(SwitchingCoeffs, RejectsBadLevelAndPendingCost) {
  EXPECT_THROW(switching_coeffs(testing::fuller(), 0), Error);
  EXPECT_THROW(switching_coeffs(testing::double_integrator_with_cost(), 1), Error);
}

TEST(ProblemOrder, Counterexample) {
  for (const auto& sys : {testing::counterexample(), extend_with_cost(testing::counterexample_with_cost())}) {
    const auto r = problem_order(sys);
    ASSERT_TRUE(r.found);
    EXPECT_EQ(r.k, 3);
    EXPECT_EQ(r.q, Rational(3, 2));
    ASSERT_EQ(r.evidence.size(), 3u);
    EXPECT_TRUE(r.evidence[0].all_zero());
    EXPECT_TRUE(r.evidence[1].all_zero());
    EXPECT_FALSE(r.evidence[2].all_zero());
    EXPECT_FALSE(r.truncated_at);
  }
}

TEST(ProblemOrder, Fuller) {
  const auto r = problem_order(testing::fuller());
  ASSERT_TRUE(r.found);
  EXPECT_EQ(r.k, 4);
  EXPECT_EQ(r.q, Rational(2));
  const auto where = r.evidence.back().first_nonzero();
  ASSERT_TRUE(where);
  EXPECT_EQ(where->first, 0u);
  EXPECT_EQ(r.evidence.back().verdicts[0][0].component, 0u);
}

TEST(ProblemOrder, HalfIntegerWitness) {
  const auto r = problem_order(testing::half_integer_witness());
  ASSERT_TRUE(r.found);
  EXPECT_EQ(r.k, 1);
  EXPECT_EQ(r.q, Rational(1, 2));
}

TEST(ProblemOrder, CommutingLinearSystemIsTruncated) {
  const auto r = problem_order(testing::double_integrator(), 6);
  EXPECT_FALSE(r.found);
  ASSERT_TRUE(r.truncated_at);
  EXPECT_EQ(*r.truncated_at, 6);
  EXPECT_EQ(r.evidence.size(), 6u);
  for (const auto& ev : r.evidence) EXPECT_TRUE(ev.all_zero());
}

TEST(ProblemOrder, RejectsBadArguments) {
  EXPECT_THROW(problem_order(testing::fuller(), 0), Error);
  EXPECT_THROW(problem_order(testing::double_integrator_with_cost()), Error);
}

TEST(ProblemOrder, DeterministicUnderSeed) {
  ZeroTestPolicy p;
  p.seed = 4242;
  const auto a = problem_order(testing::counterexample(), 10, p);
  const auto b = problem_order(testing::counterexample(), 10, p);
  const auto& va = a.evidence.back().verdicts[0][2];
  const auto& vb = b.evidence.back().verdicts[0][2];
  EXPECT_EQ(va.witness, vb.witness);
  EXPECT_EQ(va.value, vb.value);
}

TEST(Parity, FullerIsEven) {
  const auto c = verify_single_input_parity(testing::fuller());
  EXPECT_TRUE(c.applicable);
  EXPECT_TRUE(c.k_even);
  EXPECT_FALSE(c.inconsistent);
  EXPECT_EQ(c.report.k, 4);
}

TEST(Parity, MultiInputNotApplicable) {
  const auto c = verify_single_input_parity(testing::counterexample());
  EXPECT_FALSE(c.applicable);
  EXPECT_FALSE(c.inconsistent);
}

TEST(Parity, RandomSingleInputSystemsHaveEvenOrder) {
  std::mt19937_64 rng(77);
  int found = 0;
  for (int i = 0; i < 40; ++i) {
    const auto sys = testing::random_single_input_system(rng);
    const auto c = verify_single_input_parity(sys, 8);
    if (!c.applicable) continue;
    ++found;
    EXPECT_TRUE(c.k_even) << to_document(sys).dump();
  }
  EXPECT_GT(found, 10);
}

TEST(Identities, FullerShiftIdentity) {
  const auto sys = testing::fuller();
  const auto& f = sys.drift();
  const auto& g = sys.input(0);
  // both sides computed by hand: (2, 0, 0) and (-2, 0, 0)
  EXPECT_EQ(lie_bracket(g, ad_pow(f, g, 3)), field(sys.state_names(), {"2", "0", "0"}));
  EXPECT_EQ(lie_bracket(ad_pow(f, g, 1), ad_pow(f, g, 2)), field(sys.state_names(), {"-2", "0", "0"}));

  const auto r = verify_bracket_identities(sys);
  EXPECT_EQ(r.k_star, 3);
  EXPECT_FALSE(r.capped);
  EXPECT_TRUE(r.all_passed());
  int alternating = 0;
  for (const auto& c : r.checks) {
    if (c.kind == IdentityKind::AlternatingSign) ++alternating;
    EXPECT_NE(c.kind, IdentityKind::EvenLevelVanishes);
  }
  EXPECT_EQ(alternating, 4);  // j = 0..3
}

TEST(Identities, NonCommutingInputGivesSmallSet) {
  const auto sys = make({"x1", "x2"}, {"x2^2", "0"}, {{"0", "1"}});
  EXPECT_EQ(ad_pow(sys.drift(), sys.input(0), 1), field(sys.state_names(), {"-2*x2", "0"}));
  const auto r = verify_bracket_identities(sys);
  EXPECT_EQ(r.k_star, 1);
  EXPECT_TRUE(r.all_passed());
  EXPECT_EQ(r.checks.size(), 2u);  // alternating-sign for j = 0, 1; no shift identities
}

TEST(Identities, CappedWhenEverythingCommutes) {
  const auto r = verify_bracket_identities(testing::double_integrator(), {}, 5);
  EXPECT_TRUE(r.capped);
  EXPECT_EQ(r.k_star, 5);
  EXPECT_TRUE(r.all_passed());
}

TEST(Identities, RejectsMultiInput) {
  EXPECT_THROW(verify_bracket_identities(testing::counterexample()), Error);
}

TEST(Identities, CorruptedBracketIsCaught) {
  // symmetric "bracket" (Db) a + (Da) b breaks the shift identity
  const BracketFn symmetric = [](const VectorField& a, const VectorField& b) {
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
  const auto r = verify_bracket_identities(testing::fuller(), {}, kDefaultIdentityDepth, symmetric);
  EXPECT_FALSE(r.all_passed());
}

TEST(LocalOrder, CounterexampleGenericPoint) {
  const auto sys = testing::counterexample();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(6);
  std::vector<double> p(6);
  for (auto& v : x) v = u(rng);
  for (auto& v : p) v = u(rng);
  const auto r = local_order_at(sys, x, p);
  ASSERT_TRUE(r.found);
  EXPECT_EQ(r.k_local, 3);
  ASSERT_EQ(r.b_values.size(), 3u);
  // B_3[1][3] = <p, (sin theta, cos theta, 0, ...)>
  EXPECT_NEAR(r.b_values[0][2], p[0] * std::sin(x[2]) + p[1] * std::cos(x[2]), 1e-12);
}

TEST(LocalOrder, ZeroAdjointNotFound) {
  const auto sys = testing::counterexample();
  const std::vector<double> x{0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  const std::vector<double> p(6, 0.0);
  EXPECT_FALSE(local_order_at(sys, x, p).found);
}

TEST(LocalOrder, AdjointOrthogonalToAllBrackets) {
  // f = (x2, 0, 0), g = (0, 1, 0): every bracket lies in the x1 direction or is
  // g-parallel, so p along x3 annihilates everything.
  const auto sys = make({"x1", "x2", "x3"}, {"x2", "0", "0"}, {{"0", "1", "0"}});
  const std::vector<double> x{0.3, -0.2, 0.7};
  const std::vector<double> p{0.0, 0.0, 1.0};
  EXPECT_FALSE(local_order_at(sys, x, p, 6).found);
}

TEST(LocalOrder, FullerRankOne) {
  const auto sys = testing::fuller();
  const std::vector<double> x{0.2, -0.4, 0.9};
  const std::vector<double> p{-1.0, 0.3, 0.5};
  const auto r = local_order_at(sys, x, p);
  ASSERT_TRUE(r.found);
  EXPECT_EQ(r.k_local, 4);
  EXPECT_EQ(r.rank_estimate, 1);
  EXPECT_DOUBLE_EQ(r.b_values[0][0], 2.0 * p[0]);
}

TEST(LocalOrder, DimensionMismatch) {
  const auto sys = testing::fuller();
  const std::vector<double> x{0.0, 0.0};
  const std::vector<double> p{1.0, 0.0, 0.0};
  EXPECT_THROW(local_order_at(sys, x, p), DimensionError);
}

TEST(LocalOrder, EvaluationErrorNamesBracket) {
  const auto sys = make({"x1", "x2"}, {"0", "0"}, {{"1", "0"}, {"0", "1/x1"}});
  const std::vector<double> x{0.0, 1.0};
  const std::vector<double> p{1.0, 1.0};
  try {
    local_order_at(sys, x, p, 2);
    FAIL();
  } catch (const EvalError& e) {
    EXPECT_NE(std::string(e.what()).find("B_1["), std::string::npos) << e.what();
  }
}

TEST(LocalOrder, NeverBelowProblemOrder) {
  const auto sys = testing::counterexample();
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int equal = 0;
  for (int i = 0; i < 100; ++i) {
    std::vector<double> x(6);
    std::vector<double> p(6);
    for (auto& v : x) v = u(rng);
    for (auto& v : p) v = u(rng);
    const auto r = local_order_at(sys, x, p);
    ASSERT_TRUE(r.found);
    EXPECT_GE(r.k_local, 3);
    if (r.k_local == 3) ++equal;
  }
  EXPECT_GE(equal, 95);
}

TEST(NumericalRank, Basic) {
  EXPECT_EQ(numerical_rank({{1.0, 0.0}, {0.0, 1.0}}, 1e-9), 2);
  EXPECT_EQ(numerical_rank({{1.0, 2.0}, {2.0, 4.0}}, 1e-9), 1);
  EXPECT_EQ(numerical_rank({{0.0, 0.0}, {0.0, 0.0}}, 1e-9), 0);
}

}  // namespace
}  // namespace lieorder
