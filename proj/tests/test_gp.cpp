#include <cmath>

#include <gtest/gtest.h>

#include "posgp/gp.hpp"

using namespace posgp;

namespace {

Monomial var(const std::string& n, double a = 1.0) { return Monomial::variable(n, a); }

GpProblem one_var_problem() {
  GpProblem p;
  p.vars = VarSpace({"x"});
  p.objective = Posynomial(var("x"));
  p.add(Posynomial(var("x", -1.0)), true, "lower");
  return p;
}

GpProblem two_var_problem() {
  GpProblem p;
  p.vars = VarSpace({"x", "y"});
  p.objective = Posynomial(var("x")) + Posynomial(var("y"));
  p.add(Posynomial(var("x", -1.0) * var("y", -1.0)), true, "product");
  return p;
}

}  // namespace

TEST(Solve, StrictLowerBound) {
  SolveResult r = solve(one_var_problem());
  ASSERT_EQ(r.status, SolveStatus::Optimal) << r.message;
  EXPECT_NEAR(r.point.at("x"), 1.0 / (1.0 - 1e-4), 1e-7);
  EXPECT_LE(r.kkt_residual, 1e-8);
}

TEST(Solve, SymmetricTwoVariable) {
  SolveResult r = solve(two_var_problem());
  ASSERT_EQ(r.status, SolveStatus::Optimal) << r.message;
  EXPECT_NEAR(r.point.at("x"), r.point.at("y"), 1e-6);
  EXPECT_NEAR(r.objective_value, 2.0, 1e-3);
}

TEST(Solve, ShrinkingVariablesArePinned) {
  // w only ever helps by shrinking; z appears nowhere
  GpProblem p = one_var_problem();
  p.vars = VarSpace({"x", "w", "z"});
  p.add(Posynomial(var("x", -1.0)) + Posynomial(var("w")), true, "lower");
  SolveResult r = solve(p);
  ASSERT_EQ(r.status, SolveStatus::Optimal) << r.message;
  EXPECT_NEAR(r.point.at("x"), 1.0 / (1.0 - 1e-4), 1e-7);
  EXPECT_EQ(r.point.at("w"), std::exp(-SolveOptions{}.log_box));
  EXPECT_EQ(r.point.at("z"), 1.0);
  ASSERT_EQ(r.constraint_values.size(), 2u);
  EXPECT_LT(r.constraint_values[1], 1.0);
}

TEST(Solve, EveryVariablePinned) {
  GpProblem p;
  p.vars = VarSpace({"w"});
  p.objective = Posynomial(var("w"));
  p.add(Posynomial(var("w")) + Posynomial(0.5), false, "cap");
  SolveResult r = solve(p);
  EXPECT_EQ(r.status, SolveStatus::Optimal);
  p.add(Posynomial(var("w")) + Posynomial(2.0), false, "impossible");
  EXPECT_EQ(solve(p).status, SolveStatus::Infeasible);
}

TEST(Solve, DetectsInfeasibility) {
  GpProblem p;
  p.vars = VarSpace({"x"});
  p.objective = Posynomial(var("x"));
  p.add(Posynomial(var("x")), false, "upper");
  p.add(Posynomial(var("x", -1.0).scaled(2.0)), false, "lower");
  SolveResult r = solve(p);
  EXPECT_EQ(r.status, SolveStatus::Infeasible);
  EXPECT_GT(r.phase1_value, 0.0);
}

TEST(Solve, BoundaryOnlyFeasibleIsInfeasibleUnderMargin) {
  GpProblem p;
  p.vars = VarSpace({"x"});
  p.objective = Posynomial(var("x"));
  p.add(Posynomial(var("x")), true, "upper");
  p.add(Posynomial(var("x", -1.0)), true, "lower");
  EXPECT_EQ(solve(p).status, SolveStatus::Infeasible);
}

TEST(Solve, MonomialEqualityIsEliminated) {
  GpProblem p = two_var_problem();
  p.equalities.push_back(var("x") * var("y", -1.0).scaled(0.5));  // x = 2y
  SolveResult r = solve(p);
  ASSERT_EQ(r.status, SolveStatus::Optimal) << r.message;
  EXPECT_NEAR(r.point.at("x"), 2.0 * r.point.at("y"), 1e-8);
  // x y >= 1 with x = 2y: y = 1/sqrt(2)
  EXPECT_NEAR(r.objective_value, 3.0 / std::sqrt(2.0), 1e-3);
}

TEST(Solve, InconsistentEqualitiesAreInfeasible) {
  GpProblem p = one_var_problem();
  p.equalities.push_back(var("x"));
  p.equalities.push_back(var("x").scaled(2.0));
  EXPECT_EQ(solve(p).status, SolveStatus::Infeasible);
}

TEST(Solve, Deterministic) {
  SolveResult a = solve(two_var_problem()), b = solve(two_var_problem());
  EXPECT_EQ(a.point, b.point);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(Solve, SelfCertifiesWithHalfMargin) {
  GpProblem p = two_var_problem();
  p.add(Posynomial(var("x").scaled(0.2)), true, "cap");
  SolveResult r = solve(p);
  ASSERT_EQ(r.status, SolveStatus::Optimal);
  EXPECT_TRUE(check_feasibility(p, r.point, 0.5e-4).strictly_feasible);
}

TEST(Solve, ObjectiveScalingLeavesArgminUnchanged) {
  GpProblem p = two_var_problem(), q = two_var_problem();
  q.objective = q.objective * 7.5;
  SolveResult a = solve(p), b = solve(q);
  ASSERT_EQ(b.status, SolveStatus::Optimal);
  EXPECT_NEAR(a.point.at("x"), b.point.at("x"), 1e-6);
  EXPECT_NEAR(a.point.at("y"), b.point.at("y"), 1e-6);
}

TEST(Solve, BarrierObjectiveIsMonotone) {
  GpProblem p = two_var_problem();
  p.add(Posynomial(var("x", 0.5).scaled(0.1)) + Posynomial(var("y", -2.0).scaled(0.3)), true, "mix");
  SolveResult r = solve(p);
  ASSERT_EQ(r.status, SolveStatus::Optimal);
  for (std::size_t k = 1; k < r.objective_history.size(); ++k)
    EXPECT_LE(r.objective_history[k], r.objective_history[k - 1] * (1 + 1e-9));
}

TEST(Solve, MaxItersReported) {
  SolveOptions o;
  o.max_iters = 1;
  EXPECT_EQ(solve(two_var_problem(), o).status, SolveStatus::MaxIters);
}

TEST(Normalize, SeriesApproximatesExponential) {
  GpProblem p;
  p.vars = VarSpace({"r"});
  p.objective = Posynomial(var("r"));
  p.exp_constraints.push_back({Posynomial(0.5), var("r"), 1.0, Posynomial(1.0), false, "exp"});
  SolveOptions o;
  o.delay_series_order = 2;
  GpProblem q = normalize(p, o);
  ASSERT_EQ(q.constraints.size(), 1u);
  const double rho = 0.1;
  EXPECT_NEAR(q.constraints[0].f.eval({{"r", rho}}) - 0.5, std::expm1(rho), 2e-4);
  EXPECT_NEAR(q.constraints[0].f.eval({{"r", rho}}) - 0.5, rho + rho * rho / 2, 1e-15);
}

TEST(Normalize, StrictMarginScalesOnlyStrictConstraints) {
  GpProblem p = one_var_problem();
  p.add(Posynomial(var("x").scaled(0.1)), false, "box");
  GpProblem q = normalize(p);
  EXPECT_NEAR(q.constraints[0].f.eval({{"x", 1.0}}), 1.0 / (1 - 1e-4), 1e-15);
  EXPECT_EQ(q.constraints[1].f.eval({{"x", 1.0}}), 0.1);
}

TEST(Normalize, UnknownVariableRejected) {
  GpProblem p = one_var_problem();
  p.add(Posynomial(var("y")), false, "stray");
  EXPECT_THROW(normalize(p), std::invalid_argument);
}

TEST(LogTransform, ConstraintValueIsLogOfOriginal) {
  GpProblem p = two_var_problem();
  p.add(Posynomial(var("x", 0.5).scaled(0.1)) + Posynomial(var("y", -2.0).scaled(0.3)), true, "mix");
  LogProblem lp = log_transform(normalize(p));
  GpProblem q = normalize(p);
  Eigen::Vector2d z(0.4, -1.3);
  Point pt{{"x", std::exp(0.4)}, {"y", std::exp(-1.3)}};
  for (std::size_t i = 0; i < q.constraints.size(); ++i)
    EXPECT_NEAR(lp.constraints[i].value(z), std::log(q.constraints[i].f.eval(pt)), 1e-12);
}

TEST(CheckFeasibility, BoundaryIsNotStrict) {
  GpProblem p = one_var_problem();
  EXPECT_FALSE(check_feasibility(p, {{"x", 1.0}}, 1e-4).strictly_feasible);
  EXPECT_TRUE(check_feasibility(p, {{"x", 1.01}}, 1e-4).strictly_feasible);
}

TEST(SolveOptions, Validation) {
  SolveOptions o;
  o.strict_margin = 0.0;
  EXPECT_THROW(o.validate(), std::invalid_argument);
}
