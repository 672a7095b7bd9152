#include <cmath>

#include <gtest/gtest.h>

#include "posgp/system.hpp"
#include "support.hpp"

using namespace posgp;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd m11(double x) { return MatrixXd::Constant(1, 1, x); }

NumericSystem scalar(double f) { return NumericSystem(m11(f), m11(1), m11(1)); }

NumericSystem diag12(const MatrixXd& g, const MatrixXd& h) {
  MatrixXd f = MatrixXd::Zero(2, 2);
  f.diagonal() << -1, -2;
  return NumericSystem(f, g, h);
}

NumericSystem scalar_delay(double f, double ad, double h = 1.0) {
  return NumericSystem(m11(f), m11(1), m11(1), DelayBlock{m11(ad), m11(0), h});
}

}  // namespace

TEST(NumericSystem, RejectsNonMetzler) {
  MatrixXd f(2, 2);
  f << -1, -0.1, 0, -1;
  EXPECT_THROW(NumericSystem(f, MatrixXd::Ones(2, 1), MatrixXd::Ones(1, 2)), std::invalid_argument);
  EXPECT_THROW(NumericSystem(m11(-1), m11(-1), m11(1)), std::invalid_argument);
}

TEST(Instantiate, ScalarAssembly) {
  ParamSystem ps;
  ps.vars = VarSpace({"th"});
  ps.Atilde = PosyMatrix(1, 1);
  ps.R = DiagMonoMatrix({Monomial::variable("th")});
  ps.B = PosyMatrix::from_numeric(m11(1));
  ps.C = PosyMatrix::from_numeric(m11(1));
  NumericSystem s = instantiate(ps, {{"th", 2.0}});
  EXPECT_EQ(s.F()(0, 0), -2.0);
  EXPECT_EQ(s.G()(0, 0), 1.0);
  EXPECT_EQ(s.H()(0, 0), 1.0);
}

TEST(Instantiate, OffDiagonalPosynomial) {
  ParamSystem ps;
  ps.vars = VarSpace({"a", "b"});
  ps.Atilde = PosyMatrix(2, 2);
  ps.Atilde.set(0, 1, Posynomial(Monomial(1.0, {{"a", 1}, {"b", 1}})));
  ps.R = DiagMonoMatrix({Monomial::variable("a"), Monomial::variable("b")});
  ps.B = PosyMatrix::from_numeric(MatrixXd::Ones(2, 1));
  ps.C = PosyMatrix::from_numeric(MatrixXd::Ones(1, 2));
  NumericSystem s = instantiate(ps, {{"a", 2.0}, {"b", 3.0}});
  EXPECT_EQ(s.F()(0, 1), 6.0);
  EXPECT_THROW(instantiate(ps, {{"a", 2.0}}), std::invalid_argument);
}

TEST(Instantiate, RoundTripAgainstSymbolic) {
  testkit::Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    ParamSystem ps;
    ps.vars = VarSpace({"p", "q"});
    ps.Atilde = PosyMatrix(3, 3);
    std::vector<Monomial> r;
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j)
        if (testkit::uniform(rng, 0, 1) < 0.5)
          ps.Atilde.set(i, j, Posynomial(Monomial(testkit::uniform(rng, 0.1, 2), {{"p", testkit::uniform(rng, -1, 1)}})) +
                                  Posynomial(Monomial::variable("q", 2.0)));
      r.push_back(Monomial(testkit::uniform(rng, 1, 2), {{"q", 1.0}}));
    }
    ps.R = DiagMonoMatrix(r);
    ps.B = PosyMatrix::from_numeric(MatrixXd::Ones(3, 1));
    ps.C = PosyMatrix::from_numeric(MatrixXd::Ones(1, 3));
    Point th{{"p", testkit::uniform(rng, 0.2, 3)}, {"q", testkit::uniform(rng, 0.2, 3)}};
    NumericSystem s = instantiate(ps, th);
    MatrixXd back = s.F();
    back.diagonal() += ps.R.eval(th);
    EXPECT_LT((back - ps.Atilde.eval(th)).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Instantiate, R0FactorizationMustMatch) {
  ParamSystem ps;
  ps.vars = VarSpace({"th"});
  ps.Atilde = PosyMatrix(2, 2);
  ps.r0 = R0Factorization{Monomial::variable("th"), (VectorXd(2) << 1, 2).finished()};
  ps.R = ParamSystem::diag_from_factor(*ps.r0);
  ps.B = PosyMatrix::from_numeric(MatrixXd::Ones(2, 1));
  ps.C = PosyMatrix::from_numeric(MatrixXd::Ones(1, 2));
  EXPECT_NO_THROW(ps.validate());
  ps.R = DiagMonoMatrix({Monomial::variable("th"), Monomial::variable("th")});
  EXPECT_THROW(ps.validate(), std::invalid_argument);
}

TEST(SpectralAbscissa, Examples) {
  EXPECT_DOUBLE_EQ(spectral_abscissa(-MatrixXd::Identity(2, 2)), -1.0);
  MatrixXd a(2, 2), b(2, 2);
  a << -1, 0.5, 0.5, -1;
  b << 0, 1, 1, 0;
  EXPECT_NEAR(spectral_abscissa(a), -0.5, 1e-14);
  EXPECT_NEAR(spectral_abscissa(b), 1.0, 1e-14);
  EXPECT_FALSE(is_hurwitz(b));
}

TEST(H2Norm, Examples) {
  EXPECT_NEAR(h2_norm(scalar(-1)), 1.0 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(h2_norm(diag12(MatrixXd::Identity(2, 2), MatrixXd::Identity(2, 2))), std::sqrt(0.75), 1e-14);
  EXPECT_EQ(h2_norm(NumericSystem(m11(-1), m11(1), MatrixXd::Zero(1, 1))), 0.0);
  EXPECT_THROW(h2_norm(scalar(1)), std::domain_error);
}

TEST(HinfNorm, Examples) {
  EXPECT_NEAR(hinf_norm(scalar(-1)), 1.0, 1e-14);
  EXPECT_EQ(hinf_norm(NumericSystem(m11(-1), MatrixXd::Zero(1, 1), m11(1))), 0.0);
  EXPECT_NEAR(hinf_norm(diag12(MatrixXd::Ones(2, 1), MatrixXd::Ones(1, 2))), 1.5, 1e-14);
}

TEST(HinfNorm, AttainedAtZeroFrequency) {
  testkit::Rng rng(8);
  const auto grid = log_grid(1e-3, 1e3, 201);
  for (int trial = 0; trial < 50; ++trial) {
    NumericSystem s = testkit::random_positive_system(rng, 6);
    const double static_gain = hinf_norm(s), swept = hinf_frequency_sweep(s, grid);
    EXPECT_LE(swept, static_gain * (1 + 1e-12));
    EXPECT_NEAR(swept, static_gain, 1e-6 * static_gain);
    EXPECT_NEAR(hinf_frequency_sweep(s, {grid.front()}), swept, 1e-14 * swept);
  }
}

TEST(Hankel, Examples) {
  auto sv = hankel_singular_values(scalar(-1));
  ASSERT_EQ(sv.size(), 1u);
  EXPECT_NEAR(sv[0], 0.5, 1e-14);
  sv = hankel_singular_values(diag12(MatrixXd::Identity(2, 2), MatrixXd::Identity(2, 2)));
  EXPECT_NEAR(sv[0], 0.5, 1e-14);
  EXPECT_NEAR(sv[1], 0.25, 1e-14);
  sv = hankel_singular_values(diag12(MatrixXd::Zero(2, 1), MatrixXd::Ones(1, 2)));
  EXPECT_EQ(sv, std::vector<double>(2, 0.0));
}

TEST(Hankel, SchattenConsistency) {
  testkit::Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    NormReport r = norm_report(testkit::random_positive_system(rng, 5), {1, 2, 4, 6});
    ASSERT_TRUE(std::is_sorted(r.hankel_sv.rbegin(), r.hankel_sv.rend()));
    double ss = 0;
    for (double s : r.hankel_sv) ss += s * s;
    EXPECT_NEAR(r.schatten.at(2), std::sqrt(ss), 1e-10);
    EXPECT_GE(r.schatten.at(1), r.schatten.at(2) - 1e-12);
    EXPECT_GE(r.schatten.at(2), r.schatten.at(4) - 1e-12);
    EXPECT_GE(r.schatten.at(4), r.schatten.at(6) - 1e-12);
  }
}

TEST(Grammians, RoutesAgree) {
  testkit::Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    NumericSystem s = testkit::random_positive_system(rng, 6);
    Grammians a = grammians_lyapunov(s), b = grammians_kronecker(s);
    EXPECT_LT((a.controllability - b.controllability).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LT((a.observability - b.observability).cwiseAbs().maxCoeff(), 1e-8);
    // Lyapunov residual
    MatrixXd res = s.F() * a.controllability + a.controllability * s.F().transpose() + s.G() * s.G().transpose();
    EXPECT_LT(res.cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(H2Norm, MatchesLyapunovTrace) {
  testkit::Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    NumericSystem s = testkit::random_positive_system(rng, 6);
    const double kr = h2_norm(s);
    const double ly = std::sqrt((s.H() * grammians_lyapunov(s).controllability * s.H().transpose()).trace());
    EXPECT_NEAR(kr, ly, 1e-8 * ly);
  }
}

TEST(BarMatrices, ScalarAndSparsity) {
  auto bar = build_bar_matrices(m11(3.0), m11(2.0));
  EXPECT_EQ(bar.B1, m11(3.0));
  EXPECT_EQ(bar.B2, m11(3.0));
  EXPECT_EQ(bar.C2, m11(2.0));
  auto bar2 = build_bar_matrices((MatrixXd(2, 1) << 1, 0).finished(), MatrixXd::Ones(1, 2));
  EXPECT_EQ((bar2.B1.array() != 0).count(), 2);
  EXPECT_EQ(bar2.B1.rows(), 2);
  EXPECT_EQ(bar2.B1.cols(), 4);
  EXPECT_EQ(bar2.C2.rows(), 4);
}

TEST(BarMatrices, SymbolicMatchesNumeric) {
  testkit::Rng rng(2);
  PosyMatrix b(2, 2), c(3, 2);
  b.set(0, 0, Posynomial(Monomial::variable("x")));
  b.set(1, 1, Posynomial(2.0) + Posynomial(Monomial::variable("y", -1)));
  c.set(2, 0, Posynomial(Monomial::variable("y")));
  c.set(0, 1, Posynomial(0.3));
  Point pt{{"x", 1.3}, {"y", 0.7}};
  auto sym = build_bar_matrices(b, c);
  auto num = build_bar_matrices(b.eval(pt), c.eval(pt));
  EXPECT_LT((sym.B1.eval(pt) - num.B1).norm(), 1e-15);
  EXPECT_LT((sym.B2.eval(pt) - num.B2).norm(), 1e-15);
  EXPECT_LT((sym.C1.eval(pt) - num.C1).norm(), 1e-15);
  EXPECT_LT((sym.C2.eval(pt) - num.C2).norm(), 1e-15);
}

TEST(Lyapunov, NonSymmetricRandom) {
  testkit::Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    MatrixXd a = testkit::random_metzler(rng, 5, -2, -0.5);
    MatrixXd q = testkit::random_nonneg(rng, 5, 5);
    q = q * q.transpose();
    MatrixXd x = solve_lyapunov(a, q);
    EXPECT_LT((a * x + x * a.transpose() + q).cwiseAbs().maxCoeff(), 1e-11);
  }
}

TEST(RobustAbscissa, Examples) {
  BlockPattern scalar_block{{}, 1};
  EXPECT_NEAR(robust_abscissa_estimate(scalar(-1), scalar_block, 0.0), -1.0, 1e-14);
  EXPECT_NEAR(robust_abscissa_estimate(scalar(-1), scalar_block, 0.3), -0.7, 1e-14);
  NumericSystem b0(m11(-1), MatrixXd::Zero(1, 1), m11(1));
  EXPECT_NEAR(robust_abscissa_estimate(b0, scalar_block, 5.0), -1.0, 1e-14);
  EXPECT_THROW(robust_abscissa_estimate(scalar(-1), BlockPattern{{2}, 0}, 0.1), std::invalid_argument);
}

TEST(RobustAbscissa, MonotoneInSamplesAndBelowNormBound) {
  testkit::Rng rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    MatrixXd f = testkit::random_metzler(rng, 3, -3, -1);
    NumericSystem s(f, testkit::random_nonneg(rng, 3, 3), testkit::random_nonneg(rng, 3, 3));
    BlockPattern pat{{2}, 1};
    const double a = robust_abscissa_estimate(s, pat, 0.4, 10, 7), b = robust_abscissa_estimate(s, pat, 0.4, 100, 7);
    EXPECT_LE(a, b);
    // the nominal system is always among the candidates
    EXPECT_GE(b, spectral_abscissa(f));
  }
}

TEST(DelayGains, Examples) {
  DelayGains g = delay_gains(scalar_delay(-2, 0.5));
  EXPECT_NEAR(g.l1, 1 / 1.5, 1e-14);
  EXPECT_NEAR(g.linf, 1 / 1.5, 1e-14);
  NumericSystem zero(m11(-2), m11(1), m11(0), DelayBlock{m11(0.5), m11(0), 1.0});
  EXPECT_EQ(delay_gains(zero).l1, 0.0);
}

TEST(DelayGains, DelayFreeReductionMatchesInducedNorms) {
  testkit::Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    NumericSystem s0 = testkit::random_positive_system(rng, 4);
    NumericSystem s(s0.F(), s0.G(), s0.H(), DelayBlock{MatrixXd::Zero(s0.nx(), s0.nx()), MatrixXd::Zero(s0.ny(), s0.nx()), 1.0});
    MatrixXd g0 = -s0.H() * s0.F().inverse() * s0.G();
    DelayGains g = delay_gains(s);
    EXPECT_NEAR(g.l1, g0.colwise().sum().maxCoeff(), 1e-12);
    EXPECT_NEAR(g.linf, g0.rowwise().sum().maxCoeff(), 1e-12);
  }
}

TEST(DelayDecay, Examples) {
  NumericSystem s = scalar_delay(-2, 0.5);
  EXPECT_TRUE(delay_decay_check(s, 0.1));
  EXPECT_FALSE(delay_decay_check(s, 10.0));
  NumericSystem nodelay(m11(-2), m11(1), m11(1), DelayBlock{m11(0), m11(0), 1.0});
  EXPECT_TRUE(delay_decay_check(nodelay, 1.9));
  EXPECT_FALSE(delay_decay_check(nodelay, 2.1));
}

TEST(DelayDecay, RateMatchesScalarCharacteristicRoot) {
  // lambda = -2 + 0.5 e^{-lambda}: decay rate rho solves rho = 2 - 0.5 e^{rho}
  NumericSystem s = scalar_delay(-2, 0.5);
  const double rho = delay_decay_rate(s);
  EXPECT_NEAR(rho, 2 - 0.5 * std::exp(rho), 1e-10);
}

TEST(DelaySimulation, DecaysNoSlowerThanCertifiedRate) {
  NumericSystem s = scalar_delay(-2, 0.5);
  const double rho = delay_decay_rate(s);
  auto xs = simulate_delay(s, VectorXd::Ones(1), 10.0);
  const double t_end = (xs.size() - 1) * (1.0 / 200);
  // Euler at this step tracks the envelope within a few percent
  EXPECT_LT(xs.back()(0), 2.0 * std::exp(-rho * t_end * 0.95));
  EXPECT_GT(xs.back()(0), 0.0);
}

TEST(NormReport, DelaySystemFields) {
  NormReport r = norm_report(scalar_delay(-2, 0.5));
  EXPECT_TRUE(r.stable);
  EXPECT_TRUE(r.l1_gain.has_value());
  EXPECT_FALSE(r.h2.has_value());
}

TEST(Certificates, StaticGainSlack) {
  testkit::Rng rng(1);
  for (int i = 0; i < 50; ++i) EXPECT_TRUE(testkit::static_gain_certificate_holds(rng, 1 + i % 5));
}
TEST(Certificates, PerronThreshold) {
  testkit::Rng rng(2);
  for (int i = 0; i < 50; ++i) EXPECT_TRUE(testkit::perron_threshold_holds(rng, 1 + i % 5));
}
TEST(Certificates, NormPair) {
  testkit::Rng rng(3);
  for (int i = 0; i < 50; ++i) EXPECT_TRUE(testkit::norm_pair_certificate_holds(rng, 1 + i % 4, 1 + (i / 4) % 4));
}
