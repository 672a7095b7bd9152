#pragma once

// Geometric programs in standard form and an interior-point solver working on
// the log-transformed (convex) problem.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "posgp/posynomial.hpp"

namespace posgp {

struct PosyConstraint {
  Posynomial f;
  bool strict = false;  // f < 1 in the model; tightened by the strict margin
  std::string label;
};

/// base + (exp(scale * argument) - 1) * multiplier <= 1
struct ExpConstraint {
  Posynomial base;
  Monomial argument;
  double scale = 1.0;
  Posynomial multiplier;
  bool strict = true;
  std::string label;

  double eval(const Point& x) const {
    return base.eval(x) + std::expm1(scale * argument.eval(x)) * multiplier.eval(x);
  }
};

struct GpProblem {
  VarSpace vars;
  Posynomial objective{1.0};
  std::vector<PosyConstraint> constraints;
  std::vector<Monomial> equalities;  // m(x) = 1
  std::vector<ExpConstraint> exp_constraints;
  bool normalized = false;

  void add(const Posynomial& f, bool strict, std::string label) {
    constraints.push_back({f, strict, std::move(label)});
  }
  void add(const std::optional<Posynomial>& f, bool strict, std::string label) {
    if (f) add(*f, strict, std::move(label));
  }

  /// Throws if anything references a variable outside `vars`.
  void validate() const {
    auto check = [&](const Posynomial& p, const std::string& what) {
      for (const auto& n : p.variables())
        if (!vars.contains(n)) throw std::invalid_argument("inconsistent VarSpace: '" + n + "' in " + what);
    };
    check(objective, "objective");
    for (const auto& c : constraints) check(c.f, "constraint " + c.label);
    for (const auto& m : equalities) check(Posynomial(m), "equality");
    for (const auto& e : exp_constraints) {
      check(e.base, "constraint " + e.label);
      check(Posynomial(e.argument), "constraint " + e.label);
      check(e.multiplier, "constraint " + e.label);
      if (!(e.scale > 0.0)) throw std::invalid_argument("exp constraint scale must be positive");
    }
  }
};

struct SolveOptions {
  double strict_margin = 1e-4;
  double tol_kkt = 1e-8;
  // Newton steps per centering, and outer iterations. Degenerate certificates
  // (entries whose optimum is zero) can need several hundred steps to centre.
  int max_iters = 1000;
  int delay_series_order = 20;
  double barrier_t0 = 1.0;
  double barrier_mu = 20.0;
  // Every log-variable is confined to (-log_box, log_box); keeps recession
  // directions of unconstrained auxiliaries from running off.
  double log_box = 40.0;

  void validate() const {
    if (!(strict_margin > 0.0 && strict_margin < 0.5)) throw std::invalid_argument("strict_margin must lie in (0, 0.5)");
    if (!(tol_kkt > 0.0)) throw std::invalid_argument("tol_kkt must be positive");
    if (max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
    if (delay_series_order < 1) throw std::invalid_argument("delay_series_order must be at least 1");
    if (!(barrier_mu > 1.0)) throw std::invalid_argument("barrier_mu must exceed 1");
    if (!(barrier_t0 > 0.0)) throw std::invalid_argument("barrier_t0 must be positive");
  }
};

enum class SolveStatus { Optimal, Infeasible, MaxIters, NumericFailure };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::MaxIters: return "MaxIters";
    case SolveStatus::NumericFailure: return "NumericFailure";
  }
  return "?";
}

struct SolveResult {
  SolveStatus status = SolveStatus::NumericFailure;
  Point point;
  double objective_value = std::numeric_limits<double>::quiet_NaN();
  // posynomial constraints first, then exp constraints (evaluated exactly)
  std::vector<double> constraint_values;
  std::vector<std::string> constraint_labels;
  double kkt_residual = std::numeric_limits<double>::quiet_NaN();
  double stationarity = std::numeric_limits<double>::quiet_NaN();  // |grad F0 + sum lambda grad Fi|_inf
  int iterations = 0;
  double phase1_value = std::numeric_limits<double>::quiet_NaN();  // phase-I objective (max log-constraint) at exit
  std::vector<double> objective_history;  // objective after each centering
  std::string message;
};

/// Strict constraints become f / (1 - margin) <= 1; exp constraints are
/// replaced by their truncated series expansion.
inline GpProblem normalize(const GpProblem& p, const SolveOptions& opts = {}) {
  opts.validate();
  p.validate();
  if (p.normalized) return p;
  GpProblem q;
  q.vars = p.vars;
  q.objective = p.objective;
  q.equalities = p.equalities;
  const double tighten = 1.0 / (1.0 - opts.strict_margin);
  for (const auto& c : p.constraints)
    q.constraints.push_back({c.strict ? c.f * tighten : c.f, c.strict, c.label});
  for (const auto& e : p.exp_constraints) {
    // sum_{l=1..k} (scale * arg)^l / l!
    std::vector<Monomial> series;
    double fact = 1.0;
    for (int l = 1; l <= opts.delay_series_order; ++l) {
      fact *= l;
      series.push_back(e.argument.pow(l).scaled(std::pow(e.scale, l) / fact));
    }
    Posynomial f = e.base + Posynomial(series) * e.multiplier;
    q.constraints.push_back({e.strict ? f * tighten : f, e.strict, e.label});
  }
  q.normalized = true;
  return q;
}

struct LogProblem {
  VarSpace vars;
  LogPosynomial objective;
  std::vector<LogPosynomial> constraints;
  Eigen::MatrixXd eq_matrix;  // eq_matrix * z = eq_rhs
  Eigen::VectorXd eq_rhs;
};

/// Expects a normalized problem (no exp constraints).
inline LogProblem log_transform(const GpProblem& p) {
  if (!p.exp_constraints.empty()) throw std::invalid_argument("log_transform: normalize the problem first");
  p.validate();
  LogProblem lp;
  lp.vars = p.vars;
  lp.objective = LogPosynomial(p.objective, p.vars);
  for (const auto& c : p.constraints) lp.constraints.emplace_back(c.f, p.vars);
  const auto n = static_cast<Eigen::Index>(p.vars.size());
  const auto m = static_cast<Eigen::Index>(p.equalities.size());
  lp.eq_matrix = Eigen::MatrixXd::Zero(m, n);
  lp.eq_rhs = Eigen::VectorXd::Zero(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& e = p.equalities[i];
    for (const auto& [name, a] : e.exponents()) lp.eq_matrix(i, p.vars.index(name)) = a;
    lp.eq_rhs(i) = -std::log(e.coeff());
  }
  return lp;
}

struct FeasibilityReport {
  std::vector<double> constraint_values;  // posy constraints, then exp constraints
  std::vector<double> equality_residuals;  // |log m(x)|
  bool strictly_feasible = true;
  std::vector<std::string> violated;
};

/// Strict constraints must satisfy f <= 1 - margin, the others f <= 1, and
/// equalities hold to 1e-8 in the log domain.
inline FeasibilityReport check_feasibility(const GpProblem& p, const Point& x, double margin) {
  FeasibilityReport r;
  auto record = [&](double v, bool strict, const std::string& label) {
    r.constraint_values.push_back(v);
    const double limit = strict ? 1.0 - margin : 1.0 + 1e-12;
    if (!(v <= limit) || (strict && v >= 1.0)) {
      r.strictly_feasible = false;
      r.violated.push_back(label);
    }
  };
  for (const auto& c : p.constraints) record(c.f.eval(x), c.strict, c.label);
  for (const auto& e : p.exp_constraints) record(e.eval(x), e.strict, e.label);
  for (const auto& m : p.equalities) {
    double res = std::abs(std::log(m.eval(x)));
    r.equality_residuals.push_back(res);
    if (!(res <= 1e-8)) {
      r.strictly_feasible = false;
      r.violated.push_back("equality");
    }
  }
  return r;
}

namespace detail {

// Log-barrier machinery in the reduced coordinates y, where z = z0 + N y
// parametrizes the affine set defined by the monomial equalities.
class BarrierProblem {
 public:
  BarrierProblem(const LogProblem& lp, Eigen::VectorXd z0, Eigen::MatrixXd basis, bool reduced, double box)
      : lp_(lp), z0_(std::move(z0)), basis_(std::move(basis)), reduced_(reduced), box_(box) {}

  std::size_t dim() const { return reduced_ ? basis_.cols() : lp_.vars.size(); }
  std::size_t num_constraints() const { return lp_.constraints.size(); }

  Eigen::VectorXd to_z(const Eigen::VectorXd& y) const { return reduced_ ? Eigen::VectorXd(z0_ + basis_ * y) : y; }

  bool in_box(const Eigen::VectorXd& z) const { return z.cwiseAbs().maxCoeff() < box_; }

  double max_constraint(const Eigen::VectorXd& z) const {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& c : lp_.constraints) m = std::max(m, c.value(z));
    return m;
  }

  // Phase II barrier value t*F0 - sum log(-Fi) - box terms. +inf outside domain.
  double value(double t, const Eigen::VectorXd& y, std::optional<double> shift = std::nullopt) const {
    const Eigen::VectorXd z = to_z(y);
    if (!in_box(z)) return std::numeric_limits<double>::infinity();
    double v = shift ? t * *shift : t * lp_.objective.value(z);
    for (const auto& c : lp_.constraints) {
      const double f = c.value(z) - (shift ? *shift : 0.0);
      if (!(f < 0.0)) return std::numeric_limits<double>::infinity();
      v -= std::log(-f);
    }
    for (Eigen::Index i = 0; i < z.size(); ++i) v -= std::log(box_ - z(i)) + std::log(box_ + z(i));
    return v;
  }

  // Gradient/Hessian in z of sum -log(-(Fi - s)) and the box terms; also the
  // pieces needed for the phase-I slack s (when shift is set).
  void barrier_derivatives(const Eigen::VectorXd& z, std::optional<double> shift, Eigen::VectorXd& g,
                           Eigen::MatrixXd& h, double* gs, double* hss, Eigen::VectorXd* hzs) const {
    const auto n = static_cast<Eigen::Index>(lp_.vars.size());
    g = Eigen::VectorXd::Zero(n);
    h = Eigen::MatrixXd::Zero(n, n);
    if (gs) *gs = 0.0;
    if (hss) *hss = 0.0;
    if (hzs) *hzs = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd lg;
    Eigen::MatrixXd lh;
    for (const auto& c : lp_.constraints) {
      const double f = c.evaluate(z, lg, &lh) - (shift ? *shift : 0.0);
      const double inv = -1.0 / f;  // > 0
      const auto& s = c.support();
      for (std::size_t a = 0; a < s.size(); ++a) {
        g(s[a]) += inv * lg(a);
        for (std::size_t b = 0; b < s.size(); ++b) h(s[a], s[b]) += inv * lh(a, b) + inv * inv * lg(a) * lg(b);
      }
      if (shift) {
        // d/ds of -log(s - F) = -1/(s-F) = -inv ; second derivative inv^2
        *gs -= inv;
        *hss += inv * inv;
        for (std::size_t a = 0; a < s.size(); ++a) (*hzs)(s[a]) -= inv * inv * lg(a);
      }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      const double up = 1.0 / (box_ - z(i)), lo = 1.0 / (box_ + z(i));
      g(i) += up - lo;
      h(i, i) += up * up + lo * lo;
    }
  }

  Eigen::VectorXd reduce(const Eigen::VectorXd& gz) const {
    return reduced_ ? Eigen::VectorXd(basis_.transpose() * gz) : gz;
  }
  Eigen::MatrixXd reduce(const Eigen::MatrixXd& hz) const {
    return reduced_ ? Eigen::MatrixXd(basis_.transpose() * hz * basis_) : hz;
  }

  const LogProblem& lp() const { return lp_; }
  double box() const { return box_; }

 private:
  const LogProblem& lp_;
  Eigen::VectorXd z0_;
  Eigen::MatrixXd basis_;
  bool reduced_;
  double box_;
};

// Certificate vectors are only defined up to a common scale, so the Hessian
// is nearly singular along that ray (only the box terms curve it). Jacobi
// scaling plus a tiny ridge keeps the factorization well defined there.
inline bool solve_newton(const Eigen::MatrixXd& h, const Eigen::VectorXd& g, Eigen::VectorXd& step) {
  const Eigen::VectorXd d = h.diagonal().cwiseAbs().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd hs = d.asDiagonal() * h * d.asDiagonal();
  const Eigen::VectorXd gs = d.cwiseProduct(g);
  const auto id = Eigen::MatrixXd::Identity(h.rows(), h.cols());
  for (double ridge : {0.0, 1e-14, 1e-12, 1e-10, 1e-8}) {
    Eigen::LLT<Eigen::MatrixXd> llt(hs + ridge * id);
    if (llt.info() != Eigen::Success) continue;
    step = -d.cwiseProduct(llt.solve(gs));
    if (step.allFinite()) return true;
  }
  return false;
}

// In the quadratic regime the decrement should collapse from one step to the
// next; once it stops shrinking, rounding dominates and centering is done.
struct NoiseFloor {
  double previous = std::numeric_limits<double>::infinity();
  int stalls = 0;
  bool reached(double dec, double threshold) {
    if (dec < threshold && dec > 0.25 * previous) ++stalls;
    previous = dec;
    return stalls >= 3;
  }
};

// Below this decrement the Armijo test compares differences lost in the
// rounding of the barrier value itself.
inline double quadratic_threshold(double barrier_value) {
  return std::max(1e-6, 1e3 * std::numeric_limits<double>::epsilon() * std::abs(barrier_value));
}

// A variable that never carries a negative exponent only loosens constraints
// (and lowers the objective) as it shrinks, so the lower edge of the log box
// is optimal for it. Left in, Newton crawls toward that edge along an almost
// flat direction. Pin such variables up front, repeating until nothing
// changes; variables that appear nowhere are pinned at 1.
struct Pinned {
  GpProblem problem;
  Point values;
};

inline Pinned pin_shrinking_variables(const GpProblem& normalized, double log_box) {
  Pinned out{normalized, {}};
  GpProblem& q = out.problem;
  for (;;) {
    std::map<std::string, std::pair<bool, bool>> sign;  // (has positive, has negative)
    for (const auto& name : q.vars.names()) sign[name] = {false, false};
    auto scan = [&](const Posynomial& f) {
      for (const auto& t : f.terms())
        for (const auto& [name, a] : t.exponents()) (a > 0 ? sign[name].first : sign[name].second) = true;
    };
    scan(q.objective);
    for (const auto& c : q.constraints) scan(c.f);
    for (const auto& m : q.equalities)
      for (const auto& [name, a] : m.exponents()) sign[name] = {true, true};

    Point fixed;
    for (const auto& [name, s] : sign)
      if (!s.second) fixed[name] = s.first ? -log_box : 0.0;  // log values
    if (fixed.empty()) return out;

    // substitute in log space; terms pushed below the double range vanish
    auto pin = [&](const Posynomial& f) {
      std::vector<Monomial> kept;
      for (const auto& t : f.terms()) {
        double log_coeff = std::log(t.coeff());
        Exponents rest;
        for (const auto& [name, a] : t.exponents()) {
          if (auto it = fixed.find(name); it != fixed.end())
            log_coeff += a * it->second;
          else
            rest[name] = a;
        }
        if (log_coeff > -700.0) kept.emplace_back(std::exp(log_coeff), std::move(rest));
      }
      return kept.empty() ? std::optional<Posynomial>() : std::optional<Posynomial>(Posynomial(kept));
    };
    q.objective = pin(q.objective).value_or(Posynomial(1.0));
    std::vector<PosyConstraint> kept;
    for (const auto& c : q.constraints) {
      auto f = pin(c.f);
      if (!f) continue;
      if (f->variables().empty() && f->eval({}) < 1.0) continue;
      kept.push_back({*f, c.strict, c.label});
    }
    q.constraints = std::move(kept);
    std::vector<std::string> remaining;
    for (const auto& name : q.vars.names()) {
      if (auto it = fixed.find(name); it != fixed.end())
        out.values[name] = std::exp(it->second);
      else
        remaining.push_back(name);
    }
    q.vars = VarSpace(remaining);
  }
}

}  // namespace detail

/// Phase-I / phase-II log-barrier method with damped Newton centering.
inline SolveResult solve(const GpProblem& problem, const SolveOptions& opts = {}) {
  opts.validate();
  const detail::Pinned pinned =
      detail::pin_shrinking_variables(problem.normalized ? problem : normalize(problem, opts), opts.log_box);
  const LogProblem lp = log_transform(pinned.problem);
  const auto n = static_cast<Eigen::Index>(lp.vars.size());
  SolveResult res;

  auto finish_values = [&](const Eigen::VectorXd& z) {
    res.point.clear();
    for (Eigen::Index i = 0; i < n; ++i) res.point[lp.vars.name(i)] = std::exp(z(i));
    res.point.insert(pinned.values.begin(), pinned.values.end());
    res.objective_value = problem.objective.eval(res.point);
    res.constraint_values.clear();
    res.constraint_labels.clear();
    for (const auto& c : problem.constraints) {
      res.constraint_values.push_back(c.f.eval(res.point));
      res.constraint_labels.push_back(c.label);
    }
    for (const auto& e : problem.exp_constraints) {
      res.constraint_values.push_back(e.eval(res.point));
      res.constraint_labels.push_back(e.label);
    }
  };

  if (n == 0) {
    finish_values(Eigen::VectorXd());
    const bool ok = std::all_of(pinned.problem.constraints.begin(), pinned.problem.constraints.end(),
                                [](const PosyConstraint& c) { return c.f.eval({}) < 1.0; });
    res.status = ok ? SolveStatus::Optimal : SolveStatus::Infeasible;
    res.kkt_residual = 0.0;
    if (!ok) res.message = "every variable is pinned and a constraint fails";
    return res;
  }

  // Equalities: z = z0 + N y.
  Eigen::VectorXd z0 = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd basis;
  const bool reduced = lp.eq_matrix.rows() > 0;
  if (reduced) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(lp.eq_matrix, Eigen::ComputeFullU | Eigen::ComputeFullV);
    svd.setThreshold(1e-12);
    const auto rank = svd.rank();
    z0 = svd.solve(lp.eq_rhs);
    if ((lp.eq_matrix * z0 - lp.eq_rhs).norm() > 1e-9 * (1.0 + lp.eq_rhs.norm())) {
      res.status = SolveStatus::Infeasible;
      res.message = "monomial equalities are inconsistent";
      return res;
    }
    basis = svd.matrixV().rightCols(n - rank);
    if (basis.cols() == 0) {
      // Equalities pin every variable.
      finish_values(z0);
      detail::BarrierProblem bp(lp, z0, basis, true, opts.log_box);
      if (!bp.in_box(z0) || (bp.num_constraints() > 0 && !(bp.max_constraint(z0) < 0.0))) {
        res.status = SolveStatus::Infeasible;
        res.message = "equalities determine a point that violates the constraints";
        return res;
      }
      res.status = SolveStatus::Optimal;
      res.kkt_residual = 0.0;
      return res;
    }
  }
  detail::BarrierProblem bp(lp, z0, basis, reduced, opts.log_box);
  const auto dim = static_cast<Eigen::Index>(bp.dim());
  const double m_total = static_cast<double>(bp.num_constraints() + 2 * n);
  const double newton_tol = 1e-12;
  const double armijo = 1e-2, backtrack = 0.5;

  Eigen::VectorXd y = Eigen::VectorXd::Zero(dim);
  if (!bp.in_box(bp.to_z(y))) {
    res.status = SolveStatus::NumericFailure;
    res.message = "equality-constrained starting point lies outside the log-domain box";
    return res;
  }

  // ---- phase I: minimize s subject to Fi(z) < s ----
  if (bp.num_constraints() > 0 && !(bp.max_constraint(bp.to_z(y)) < -1e-3)) {
    double s = std::max(bp.max_constraint(bp.to_z(y)), 0.0) + 1.0;
    double t = opts.barrier_t0;
    bool found = false;
    const double m1 = static_cast<double>(bp.num_constraints() + 2 * n);
    for (int outer = 0; outer < opts.max_iters && !found; ++outer) {
      detail::NoiseFloor floor;
      int k = 0;
      for (; k < opts.max_iters; ++k) {
        const Eigen::VectorXd z = bp.to_z(y);
        Eigen::VectorXd gz, hzs;
        Eigen::MatrixXd hz;
        double gs, hss;
        bp.barrier_derivatives(z, s, gz, hz, &gs, &hss, &hzs);
        // assemble the (y, s) system
        Eigen::VectorXd g(dim + 1);
        Eigen::MatrixXd h(dim + 1, dim + 1);
        g.head(dim) = bp.reduce(gz);
        g(dim) = t + gs;
        h.topLeftCorner(dim, dim) = bp.reduce(hz);
        const Eigen::VectorXd cross = bp.reduce(hzs);
        h.block(0, dim, dim, 1) = cross;
        h.block(dim, 0, 1, dim) = cross.transpose();
        h(dim, dim) = hss;
        Eigen::VectorXd step;
        if (!detail::solve_newton(h, g, step)) {
          res.status = SolveStatus::NumericFailure;
          res.message = "phase I: Newton system could not be solved";
          return res;
        }
        ++res.iterations;
        const double dec = -g.dot(step);
        if (dec / 2.0 <= newton_tol) break;
        auto phi = [&](const Eigen::VectorXd& yy, double ss) { return bp.value(t, yy, ss); };
        const double f0 = phi(y, s);
        const double threshold = detail::quadratic_threshold(f0);
        const bool quadratic = dec < threshold;
        if (floor.reached(dec, threshold)) break;
        double alpha = 1.0;
        while (alpha > 1e-16) {
          const double f1 = phi(y + alpha * step.head(dim), s + alpha * step(dim));
          if (std::isfinite(f1) && (quadratic || f1 <= f0 - armijo * alpha * dec)) break;
          alpha *= backtrack;
        }
        if (alpha <= 1e-16) break;  // no progress possible at this t
        const Eigen::VectorXd y_next = y + alpha * step.head(dim);
        const double s_next = s + alpha * step(dim);
        const bool stalled = y_next == y && s_next == s;
        y = y_next;
        s = s_next;
        if (stalled) break;
        if (bp.max_constraint(bp.to_z(y)) < -1e-3) {
          found = true;
          break;
        }
      }
      if (found) break;
      if (k == opts.max_iters) {
        res.status = SolveStatus::MaxIters;
        res.message = "phase I: centering did not converge";
        return res;
      }
      // s - m1/t bounds the phase-I optimum from below
      if (s - m1 / t > 0.0) {
        res.phase1_value = s;
        res.status = SolveStatus::Infeasible;
        res.message = "phase I certifies max log-constraint >= " + format_number(s - m1 / t);
        finish_values(bp.to_z(y));
        return res;
      }
      if (m1 / t <= 1e-10) {
        res.phase1_value = s;
        if (bp.max_constraint(bp.to_z(y)) < -1e-10) {
          found = true;
        } else {
          res.status = SolveStatus::Infeasible;
          res.message = "phase I optimum " + format_number(s) + " is not negative";
          finish_values(bp.to_z(y));
          return res;
        }
        break;
      }
      t *= opts.barrier_mu;
    }
    if (!found) {
      res.status = SolveStatus::MaxIters;
      res.message = "phase I: outer iteration limit";
      return res;
    }
  }
  res.phase1_value = bp.num_constraints() > 0 ? bp.max_constraint(bp.to_z(y)) : -1.0;

  // ---- phase II ----
  double t = opts.barrier_t0;
  double last_decrement = 0.0;
  for (int outer = 0;; ++outer) {
    if (outer >= opts.max_iters) {
      res.status = SolveStatus::MaxIters;
      res.message = "phase II: outer iteration limit";
      finish_values(bp.to_z(y));
      return res;
    }
    detail::NoiseFloor floor;
    int k = 0;
    for (; k < opts.max_iters; ++k) {
      const Eigen::VectorXd z = bp.to_z(y);
      Eigen::VectorXd gz, g0l;
      Eigen::MatrixXd hz, h0l;
      bp.barrier_derivatives(z, std::nullopt, gz, hz, nullptr, nullptr, nullptr);
      lp.objective.evaluate(z, g0l, &h0l);
      const auto& s0 = lp.objective.support();
      for (std::size_t a = 0; a < s0.size(); ++a) {
        gz(s0[a]) += t * g0l(a);
        for (std::size_t b = 0; b < s0.size(); ++b) hz(s0[a], s0[b]) += t * h0l(a, b);
      }
      const Eigen::VectorXd g = bp.reduce(gz);
      const Eigen::MatrixXd h = bp.reduce(hz);
      Eigen::VectorXd step;
      if (!detail::solve_newton(h, g, step)) {
        res.status = SolveStatus::NumericFailure;
        res.message = "phase II: Newton system could not be solved";
        finish_values(z);
        return res;
      }
      ++res.iterations;
      const double dec = -g.dot(step);
      last_decrement = dec;
      const double f0 = bp.value(t, y);
      const double threshold = detail::quadratic_threshold(f0);
      if (dec / 2.0 <= newton_tol || floor.reached(dec, threshold)) break;
      // Close to the centre the Armijo test drowns in rounding; take pure
      // Newton steps there, only guarding the domain.
      const bool quadratic = dec < threshold;
      double alpha = 1.0;
      while (alpha > 1e-16) {
        const double f1 = bp.value(t, y + alpha * step);
        if (std::isfinite(f1) && (quadratic || f1 <= f0 - armijo * alpha * dec)) break;
        alpha *= backtrack;
      }
      if (alpha <= 1e-16) break;  // at the limit of floating point progress
      const Eigen::VectorXd y_next = y + alpha * step;
      const bool stalled = y_next == y;
      y = y_next;
      if (stalled) break;
    }
    if (k == opts.max_iters) {
      res.status = SolveStatus::MaxIters;
      res.message = "phase II: centering did not converge";
      finish_values(bp.to_z(y));
      return res;
    }
    const Eigen::VectorXd z = bp.to_z(y);
    res.objective_history.push_back(problem.objective.eval([&] {
      Point pt;
      for (Eigen::Index i = 0; i < n; ++i) pt[lp.vars.name(i)] = std::exp(z(i));
      pt.insert(pinned.values.begin(), pinned.values.end());
      return pt;
    }()));
    if (m_total / t <= opts.tol_kkt) break;
    t *= opts.barrier_mu;
  }

  // KKT residual of the log-domain problem with multipliers 1/(t * -Fi).
  const Eigen::VectorXd z = bp.to_z(y);
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(n), lg;
  lp.objective.evaluate(z, lg, nullptr);
  for (std::size_t a = 0; a < lp.objective.support().size(); ++a) grad(lp.objective.support()[a]) += lg(a);
  for (const auto& c : lp.constraints) {
    const double f = c.evaluate(z, lg, nullptr);
    const double lambda = 1.0 / (t * -f);
    for (std::size_t a = 0; a < c.support().size(); ++a) grad(c.support()[a]) += lambda * lg(a);
  }
  res.stationarity = bp.reduce(grad).cwiseAbs().maxCoeff();
  // Affine-invariant residual: duality-gap bound and the centering decrement.
  res.kkt_residual = std::max(m_total / t, std::sqrt(std::max(last_decrement, 0.0)) / t);
  finish_values(z);
  if (!std::isfinite(res.objective_value)) {
    res.status = SolveStatus::NumericFailure;
    res.message = "non-finite objective at the final iterate";
    return res;
  }
  res.status = res.kkt_residual <= opts.tol_kkt ? SolveStatus::Optimal : SolveStatus::NumericFailure;
  if (res.status != SolveStatus::Optimal) res.message = "KKT residual above tolerance";
  return res;
}

}  // namespace posgp
