#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "posgp/posynomial.hpp"

using namespace posgp;

namespace {

Monomial var(const std::string& n, double a = 1.0) { return Monomial::variable(n, a); }

// Random posynomial over vars x0..x{n-1}; exponents in [-2, 2].
Posynomial random_posy(std::mt19937_64& rng, int nvars, int nterms) {
  std::uniform_real_distribution<double> ex(-2.0, 2.0), co(0.1, 3.0);
  std::vector<Monomial> t;
  for (int k = 0; k < nterms; ++k) {
    Exponents e;
    for (int i = 0; i < nvars; ++i) e["x" + std::to_string(i)] = ex(rng);
    t.emplace_back(co(rng), e);
  }
  return Posynomial(t);
}

}  // namespace

TEST(Monomial, EvaluatesRealExponents) {
  Monomial m(2.0, {{"x", 0.5}});
  EXPECT_DOUBLE_EQ(eval_monomial(m, {{"x", 4.0}}), 4.0);
}

TEST(Monomial, RejectsNonPositiveCoefficient) {
  EXPECT_THROW(Monomial(0.0), std::invalid_argument);
  EXPECT_THROW(Monomial(-1.0, {{"x", 1}}), std::invalid_argument);
}

TEST(Monomial, CancelledExponentDisappears) {
  Monomial m = var("x") * var("x", -1.0);
  EXPECT_TRUE(m.is_constant());
  EXPECT_EQ(m, Monomial(1.0));
}

TEST(Monomial, EvaluationRejectsNonPositivePoint) {
  EXPECT_THROW(var("x").eval({{"x", 0.0}}), std::domain_error);
  EXPECT_THROW(var("x").eval({}), std::invalid_argument);
}

TEST(Posynomial, Evaluates) {
  Posynomial p = Posynomial(var("x")) + Posynomial(var("x", -1.0));
  EXPECT_DOUBLE_EQ(eval_posynomial(p, {{"x", 2.0}}), 2.5);
}

TEST(Posynomial, LikeTermsMerge) {
  Posynomial p = Posynomial(var("x").scaled(2.0)) + Posynomial(var("x").scaled(3.0));
  ASSERT_EQ(p.size(), 1u);
  EXPECT_DOUBLE_EQ(p.terms()[0].coeff(), 5.0);
}

TEST(Posynomial, ProductExpands) {
  Posynomial a = Posynomial(var("x")) + Posynomial(1.0);
  Posynomial sq = posy_mul(a, a);  // x^2 + 2x + 1
  EXPECT_EQ(sq.size(), 3u);
  EXPECT_DOUBLE_EQ(sq.eval({{"x", 3.0}}), 16.0);
}

TEST(Posynomial, PowerRules) {
  Posynomial a = Posynomial(var("x")) + Posynomial(1.0);
  EXPECT_THROW(a.pow(0.5), std::invalid_argument);
  EXPECT_DOUBLE_EQ(a.pow(2).eval({{"x", 1.0}}), 4.0);
  EXPECT_DOUBLE_EQ(Posynomial(var("x")).pow(-0.5).eval({{"x", 4.0}}), 0.5);
}

TEST(Posynomial, SubstituteFixesSomeVariables) {
  Posynomial p = Posynomial(var("x") * var("y")) + Posynomial(var("y", 2.0));
  Posynomial q = p.substitute({{"x", 3.0}});
  EXPECT_EQ(q.variables(), std::vector<std::string>{"y"});
  EXPECT_DOUBLE_EQ(q.eval({{"y", 2.0}}), 10.0);
}

TEST(Posynomial, TextRendering) {
  Monomial m(2.0, {{"b1", 0.5}, {"d2", -1.0}});
  EXPECT_EQ(m.to_string(), "2*b1^0.5/d2");
  EXPECT_EQ(Monomial(1.0, {{"x", -1.0}, {"y", -2.0}}).to_string(), "1/(x*y^2)");
}

TEST(PosyMatrix, AbsenceIsZero) {
  PosyMatrix m(2, 2);
  m.set(0, 1, Posynomial(var("x")));
  EXPECT_EQ(m.at(0, 0), nullptr);
  EXPECT_EQ(m.nonzeros(), 1u);
  Eigen::MatrixXd v = m.eval({{"x", 3.0}});
  EXPECT_EQ(v(0, 0), 0.0);
  EXPECT_EQ(v(0, 1), 3.0);
}

TEST(PosyMatrix, FromNumericRejectsNegative) {
  Eigen::MatrixXd a(1, 2);
  a << 1.0, -0.1;
  EXPECT_THROW(PosyMatrix::from_numeric(a), std::invalid_argument);
}

TEST(PosyMatrix, ProductMatchesNumeric) {
  std::mt19937_64 rng(3);
  PosyMatrix a(2, 3), b(3, 2);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  a.set(0, 0, Posynomial(var("x").scaled(u(rng))));
  a.set(0, 2, Posynomial(var("y").scaled(u(rng))));
  a.set(1, 1, Posynomial(u(rng)));
  b.set(0, 1, Posynomial(var("y", -1.0)));
  b.set(2, 0, Posynomial(var("x")) + Posynomial(2.0));
  b.set(1, 1, Posynomial(var("x", 0.5)));
  Point pt{{"x", 1.7}, {"y", 0.4}};
  Eigen::MatrixXd ref = a.eval(pt) * b.eval(pt);
  EXPECT_LT(((a * b).eval(pt) - ref).norm(), 1e-12);
}

TEST(KronSum, MatchesNumericKroneckerSum) {
  PosyMatrix a(2, 2);
  a.set(0, 1, Posynomial(var("x")));
  a.set(1, 0, Posynomial(2.0));
  a.set(1, 1, Posynomial(var("y")));
  Point pt{{"x", 0.3}, {"y", 1.9}};
  Eigen::MatrixXd an = a.eval(pt), i2 = Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd ref(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) ref(r, c) = an(r / 2, c / 2) * i2(r % 2, c % 2) + i2(r / 2, c / 2) * an(r % 2, c % 2);
  EXPECT_LT((kron_sum_symbolic(a, a).eval(pt) - ref).norm(), 1e-14);
  EXPECT_THROW(kron_sum_symbolic(PosyMatrix(2, 3), a), std::invalid_argument);
}

TEST(H2Vectors, SmallExamples) {
  Eigen::MatrixXd b(2, 1), c(1, 2);
  b << 1, 2;
  c << 1, 0;
  auto [bt, ct] = build_h2_vectors(PosyMatrix::from_numeric(b), PosyMatrix::from_numeric(c));
  Eigen::VectorXd bte = bt.eval({});
  Eigen::RowVectorXd cte = ct.eval({});
  EXPECT_EQ(bte, (Eigen::VectorXd(4) << 1, 2, 2, 4).finished());
  EXPECT_EQ(cte, (Eigen::RowVectorXd(4) << 1, 0, 0, 0).finished());
  EXPECT_EQ(ct.nonzeros(), 1u);
}

TEST(LogDomain, ValueAndZeroGradientAtSymmetricPoint) {
  VarSpace vs({"x"});
  Posynomial p = Posynomial(var("x")) + Posynomial(var("x", -1.0));
  LogEval e = log_domain_eval(p, vs, Eigen::VectorXd::Zero(1));
  EXPECT_NEAR(e.value, std::log(2.0), 1e-15);
  EXPECT_NEAR(e.gradient(0), 0.0, 1e-15);
  EXPECT_GT(e.hessian(0, 0), 0.0);
}

TEST(LogDomain, MonomialIsAffine) {
  VarSpace vs({"x", "y"});
  Posynomial p(Monomial(3.0, {{"x", 2.0}, {"y", -1.0}}));
  Eigen::Vector2d z(0.3, -0.7);
  LogEval e = log_domain_eval(p, vs, z);
  EXPECT_NEAR(e.value, std::log(3.0) + 2 * 0.3 + 0.7, 1e-14);
  EXPECT_NEAR(e.hessian.norm(), 0.0, 1e-14);
}

TEST(LogDomain, DerivativesMatchFiniteDifferences) {
  std::mt19937_64 rng(11);
  VarSpace vs({"x0", "x1", "x2"});
  std::normal_distribution<double> nz(0.0, 0.5);
  for (int trial = 0; trial < 20; ++trial) {
    Posynomial p = random_posy(rng, 3, 1 + trial % 5);
    Eigen::VectorXd z(3);
    for (int i = 0; i < 3; ++i) z(i) = nz(rng);
    LogEval e = log_domain_eval(p, vs, z);
    const double h = 1e-5;
    for (int i = 0; i < 3; ++i) {
      Eigen::VectorXd zp = z, zm = z;
      zp(i) += h;
      zm(i) -= h;
      LogEval ep = log_domain_eval(p, vs, zp), em = log_domain_eval(p, vs, zm);
      EXPECT_NEAR((ep.value - em.value) / (2 * h), e.gradient(i), 1e-6);
      for (int j = 0; j < 3; ++j) EXPECT_NEAR((ep.gradient(j) - em.gradient(j)) / (2 * h), e.hessian(i, j), 1e-6);
    }
  }
}

TEST(LogDomain, HessianIsPositiveSemidefinite) {
  std::mt19937_64 rng(5);
  VarSpace vs({"x0", "x1", "x2"});
  for (int trial = 0; trial < 50; ++trial) {
    Posynomial p = random_posy(rng, 3, 4);
    Eigen::VectorXd z = Eigen::VectorXd::Random(3);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(log_domain_eval(p, vs, z).hessian);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12);
  }
}

TEST(LogDomain, UnknownVariableThrows) {
  VarSpace vs({"x"});
  EXPECT_THROW(log_domain_eval(Posynomial(var("y")), vs, Eigen::VectorXd::Zero(1)), std::invalid_argument);
}
