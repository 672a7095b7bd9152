#pragma once

// Random instance generators and certificate checks shared by unit and acceptance tests.

#include <random>

#include <Eigen/Dense>

#include "posgp/synth.hpp"
#include "posgp/system.hpp"

namespace posgp::testkit {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Nonnegative matrix; each entry nonzero with probability `density`.
inline Eigen::MatrixXd random_nonneg(Rng& rng, Eigen::Index r, Eigen::Index c, double density = 0.7) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j)
      if (uniform(rng, 0, 1) < density) m(i, j) = uniform(rng, 0.1, 1.0);
  return m;
}

/// Metzler matrix with spectral abscissa drawn from [lo, hi].
inline Eigen::MatrixXd random_metzler(Rng& rng, Eigen::Index n, double lo, double hi) {
  Eigen::MatrixXd m = random_nonneg(rng, n, n, 0.6);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = -uniform(rng, 0.0, 2.0);
  const double target = uniform(rng, lo, hi);
  m.diagonal().array() += target - spectral_abscissa(m);
  return m;
}

/// Stable positive system with n_x in [1, max_nx] and spectral abscissa in [-3, -1.2].
inline NumericSystem random_positive_system(Rng& rng, int max_nx, int max_io = 3) {
  const int n = uniform_int(rng, 1, max_nx), nw = uniform_int(rng, 1, max_io), ny = uniform_int(rng, 1, max_io);
  Eigen::MatrixXd g = random_nonneg(rng, n, nw), h = random_nonneg(rng, ny, n);
  g(uniform_int(rng, 0, n - 1), 0) += 0.5;  // not identically zero
  h(0, uniform_int(rng, 0, n - 1)) += 0.5;
  return NumericSystem(random_metzler(rng, n, -3.0, -1.2), g, h);
}

inline bool all_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return ((b - a).array() > 0.0).all(); }

/// For Hurwitz Metzler F with -H F^{-1} g < v, the vector
/// omega = -F^{-1}(g + slack) gives H omega < v and F omega + g < 0.
inline bool static_gain_certificate_holds(Rng& rng, int n) {
  const Eigen::MatrixXd f = random_metzler(rng, n, -3.0, -0.2);
  const Eigen::VectorXd g = random_nonneg(rng, n, 1);
  const Eigen::MatrixXd h = random_nonneg(rng, n, n);
  const Eigen::VectorXd base = -h * f.partialPivLu().solve(g);
  Eigen::VectorXd v = base;
  for (Eigen::Index i = 0; i < n; ++i) v(i) += uniform(rng, 0.01, 0.5);
  // slack small enough that H (-F^{-1}) slack stays below the margin
  const double margin = (v - base).minCoeff();
  const Eigen::MatrixXd neg_inv = -f.inverse();
  const double gain = (h * neg_inv).cwiseAbs().rowwise().sum().maxCoeff();
  const double eps = 0.5 * margin / std::max(gain, 1e-12);
  const Eigen::VectorXd omega = neg_inv * (g + Eigen::VectorXd::Constant(n, eps));
  return (omega.array() > 0).all() && all_less(h * omega, v) && all_less(f * omega + g, Eigen::VectorXd::Zero(n));
}

/// Perron-Frobenius threshold: gamma above lambda_max admits positive v with
/// M v < gamma v via the resolvent; gamma below it admits none (checked on
/// the resolvent candidate and on random positive vectors).
inline bool perron_threshold_holds(Rng& rng, int n) {
  const Eigen::MatrixXd m = random_metzler(rng, n, -2.0, 2.0);
  const double lam = spectral_abscissa(m);
  const double above = lam + uniform(rng, 0.01, 1.0), below = lam - uniform(rng, 0.01, 1.0);
  auto resolvent = [&](double gamma) {
    Eigen::MatrixXd a = gamma * Eigen::MatrixXd::Identity(n, n) - m;
    return Eigen::VectorXd(a.partialPivLu().solve(Eigen::VectorXd::Ones(n)));
  };
  const Eigen::VectorXd v = resolvent(above);
  if (!((v.array() > 0).all() && all_less(m * v, above * v))) return false;
  auto certifies = [&](const Eigen::VectorXd& x) { return (x.array() > 0).all() && all_less(m * x, below * x); };
  if (certifies(resolvent(below))) return false;
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = uniform(rng, 0.01, 1.0);
    if (certifies(x)) return false;
  }
  return true;
}

/// For nonnegative M, ||M|| < gamma iff the pair built from the
/// resolvent of M^T M satisfies M u < gamma v and M^T v < gamma u.
inline bool norm_pair_certificate_holds(Rng& rng, int rows, int cols) {
  Eigen::MatrixXd m = random_nonneg(rng, rows, cols, 0.8);
  m(0, 0) += 0.2;
  const double nrm = Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()(0);
  auto construct_ok = [&](double gamma) {
    const Eigen::MatrixXd mtm = m.transpose() * m;
    Eigen::MatrixXd a = gamma * gamma * Eigen::MatrixXd::Identity(cols, cols) - mtm;
    const Eigen::VectorXd u = a.partialPivLu().solve(Eigen::VectorXd::Ones(cols));
    if (!(u.array() > 0).all()) return false;
    // gamma - e with M^T M u < gamma (gamma - e) u
    const double ratio = ((mtm * u).array() / u.array()).maxCoeff() / gamma;
    const double shrink = 0.5 * (gamma - ratio);
    if (!(shrink > 0)) return false;
    const double ge = gamma - shrink;
    const Eigen::VectorXd mu = m * u;
    const double kappa = 1e-9 * (1.0 + mu.maxCoeff());
    const Eigen::VectorXd v = (mu + Eigen::VectorXd::Constant(rows, kappa)) / ge;
    return (v.array() > 0).all() && all_less(m * u, gamma * v) && all_less(m.transpose() * v, gamma * u);
  };
  const double above = nrm * uniform(rng, 1.01, 1.5), below = nrm * uniform(rng, 0.5, 0.99);
  return construct_ok(above) && !construct_ok(below);
}

/// Parametrized instance with R(theta) = t0 * R0 and coupling scaled by t1.
/// Cost t0 + 1/t1 trades stabilization against coupling; the box keeps
/// t0 <= 50 and t1 in [0.1, 2]. `reference` is an interior point of the box.
struct ParamInstance {
  ParamSystem ps;
  CostSpec cost;
  ThetaSet theta;
  Point reference{{"t0", 25.0}, {"t1", 1.0}};
};

inline ParamInstance random_param_instance(Rng& rng, int max_nx, int max_io, bool square_io = false,
                                           bool with_delay = false) {
  const int n = uniform_int(rng, 1, max_nx);
  const int nw = uniform_int(rng, 1, max_io), ny = square_io ? nw : uniform_int(rng, 1, max_io);
  ParamInstance inst;
  ParamSystem& ps = inst.ps;
  ps.vars = VarSpace({"t0", "t1"});
  const Eigen::MatrixXd fixed = random_nonneg(rng, n, n, 0.4), coupled = random_nonneg(rng, n, n, 0.4);
  Eigen::MatrixXd ad = Eigen::MatrixXd::Zero(n, n);
  if (with_delay) ad = random_nonneg(rng, n, n, 0.5) * 0.5;
  ps.Atilde = PosyMatrix::from_numeric(fixed + ad);
  const PosyMatrix coupling = PosyMatrix::from_numeric(coupled);
  for (const auto& [ij, p] : coupling.entries())
    ps.Atilde.set(ij.first, ij.second, add_opt(ps.Atilde.get(ij.first, ij.second), p * Posynomial(Monomial::variable("t1"))));
  Eigen::VectorXd r0(n);
  for (int i = 0; i < n; ++i) r0(i) = uniform(rng, 0.5, 1.5);
  ps.r0 = R0Factorization{Monomial::variable("t0"), r0};
  ps.R = ParamSystem::diag_from_factor(*ps.r0);
  Eigen::MatrixXd b = random_nonneg(rng, n, nw), c = random_nonneg(rng, ny, n);
  b(uniform_int(rng, 0, n - 1), 0) += 0.5;
  c(0, uniform_int(rng, 0, n - 1)) += 0.5;
  ps.B = PosyMatrix::from_numeric(b);
  ps.C = PosyMatrix::from_numeric(c);
  if (with_delay) ps.delay = ParamDelay{PosyMatrix::from_numeric(ad), PosyMatrix(ny, n), uniform(rng, 0.2, 1.0)};
  inst.cost.Ltilde = Posynomial(Monomial::variable("t0")) + Posynomial(Monomial::variable("t1", -1.0));
  inst.theta.constraints = {Posynomial(Monomial::variable("t0").scaled(1.0 / 50)),
                            Posynomial(Monomial::variable("t1").scaled(0.5)),
                            Posynomial(Monomial::variable("t1", -1.0).scaled(0.1))};
  return inst;
}

/// First-order scalar system xdot = -th x + w, y = x with cost th.
inline ParamInstance scalar_instance(double lower = 0.01, double upper = 100.0) {
  ParamInstance inst;
  ParamSystem& ps = inst.ps;
  ps.vars = VarSpace({"th"});
  ps.Atilde = PosyMatrix(1, 1);
  ps.r0 = R0Factorization{Monomial::variable("th"), Eigen::VectorXd::Ones(1)};
  ps.R = ParamSystem::diag_from_factor(*ps.r0);
  ps.B = PosyMatrix::from_numeric(Eigen::MatrixXd::Ones(1, 1));
  ps.C = PosyMatrix::from_numeric(Eigen::MatrixXd::Ones(1, 1));
  inst.cost.Ltilde = Posynomial(Monomial::variable("th"));
  inst.theta.constraints = {Posynomial(Monomial::variable("th").scaled(1.0 / upper)),
                            Posynomial(Monomial::variable("th", -1.0).scaled(lower))};
  inst.reference = {{"th", 1.0}};
  return inst;
}

}  // namespace posgp::testkit

namespace posgp {
inline void PrintTo(SolveStatus s, std::ostream* os) { *os << to_string(s); }
}  // namespace posgp
