#pragma once

// GP builders for norm-constrained parameter tuning of positive systems.
// Every builder starts from the same skeleton (objective = shifted cost,
// box/budget constraints on theta) and appends the certificate constraints
// for one system norm. Auxiliary variables carry bracketed names such as
// "xi[0]" or "gamma2[]" so they can never collide with problem variables.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "posgp/gp.hpp"
#include "posgp/posynomial.hpp"
#include "posgp/system.hpp"

namespace posgp {

struct CostSpec {
  Posynomial Ltilde{1.0};
  double L0 = 0.0;

  double cost(const Point& theta) const { return Ltilde.eval(theta) - L0; }
  bool operator==(const CostSpec& o) const { return Ltilde == o.Ltilde && L0 == o.L0; }
};

/// Each entry f means f(theta) <= 1.
struct ThetaSet {
  std::vector<Posynomial> constraints;
  bool operator==(const ThetaSet& o) const { return constraints == o.constraints; }
};

enum class Monotonicity { Constant, Nondecreasing, Nonincreasing, Mixed };

inline const char* to_string(Monotonicity m) {
  switch (m) {
    case Monotonicity::Constant: return "constant";
    case Monotonicity::Nondecreasing: return "nondecreasing";
    case Monotonicity::Nonincreasing: return "nonincreasing";
    case Monotonicity::Mixed: return "mixed";
  }
  return "?";
}

/// A posynomial in a few named gain arguments. Arguments are positional: the
/// builder renames them onto its own gain variables.
struct TradeoffFn {
  Posynomial expr{1.0};
  std::vector<std::string> args;

  /// On the positive orthant a posynomial is monotone in x exactly when all
  /// exponents of x share a sign.
  Monotonicity monotonicity(std::size_t arg) const {
    const std::string& name = args.at(arg);
    bool up = false, down = false;
    for (const auto& t : expr.terms()) {
      const double a = t.exponent(name);
      up |= a > 0.0;
      down |= a < 0.0;
    }
    if (up && down) return Monotonicity::Mixed;
    if (up) return Monotonicity::Nondecreasing;
    if (down) return Monotonicity::Nonincreasing;
    return Monotonicity::Constant;
  }

  Posynomial bind(const std::vector<std::string>& targets) const {
    if (targets.size() != args.size())
      throw std::invalid_argument("tradeoff function expects " + std::to_string(targets.size()) + " arguments");
    std::map<std::string, std::string> ren;
    for (std::size_t i = 0; i < args.size(); ++i) ren[args[i]] = targets[i];
    for (const auto& v : expr.variables())
      if (!ren.count(v)) throw std::invalid_argument("tradeoff function uses unknown argument '" + v + "'");
    return expr.renamed(ren);
  }

  bool operator==(const TradeoffFn& o) const { return expr == o.expr && args == o.args; }
};

struct UncertaintyStructure {
  BlockPattern pattern;
  double eps = 0.0;
  bool operator==(const UncertaintyStructure& o) const { return pattern == o.pattern && eps == o.eps; }
};

struct DelayGpOptions {
  // rho * h <= rho_cap keeps the truncated exponential series accurate; <= 0 disables
  double rho_cap = 5.0;
};

namespace aux {
inline std::string indexed(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }
inline const std::string kGamma = "gamma[]";
inline const std::string kGamma2 = "gamma2[]";
inline const std::string kGammaInf = "gammainf[]";
inline const std::string kGamma1 = "gamma1[]";
inline const std::string kRho = "rho[]";
inline const std::string kEps = "eps[]";
}  // namespace aux

namespace detail {

using PosyVec = std::vector<std::optional<Posynomial>>;

inline std::vector<Monomial> declare(GpProblem& p, const std::string& base, std::size_t n) {
  std::vector<Monomial> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string name = aux::indexed(base, i);
    p.vars.add(name);
    out.push_back(Monomial::variable(name));
  }
  return out;
}

inline Monomial declare_scalar(GpProblem& p, const std::string& name) {
  p.vars.add(name);
  return Monomial::variable(name);
}

inline PosyVec of(const std::vector<Monomial>& x) { return PosyVec(x.begin(), x.end()); }

inline PosyVec mul(const PosyMatrix& m, const PosyVec& x) {
  if (m.cols() != x.size()) throw std::invalid_argument("dimension mismatch in matrix-vector product");
  PosyVec out(m.rows());
  for (const auto& [ij, a] : m.entries())
    if (x[ij.second]) out[ij.first] = add_opt(out[ij.first], a * *x[ij.second]);
  return out;
}

inline PosyVec plus(const PosyVec& a, const PosyVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch in vector sum");
  PosyVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = add_opt(a[i], b[i]);
  return out;
}

inline PosyVec column(const PosyMatrix& m, std::size_t j) {
  PosyVec out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) out[i] = m.get(i, j);
  return out;
}

inline PosyVec row_sums(const PosyMatrix& m) {
  PosyVec out(m.rows());
  for (const auto& [ij, a] : m.entries()) out[ij.first] = add_opt(out[ij.first], a);
  return out;
}

/// num[i] / den[i] < 1 for every structurally nonzero row.
inline void add_rows(GpProblem& p, const PosyVec& num, const std::vector<Monomial>& den, const std::string& label,
                     bool strict = true) {
  for (std::size_t i = 0; i < num.size(); ++i)
    if (num[i]) p.add(*num[i] / den[i], strict, aux::indexed(label, i));
}

inline std::vector<Monomial> times(const std::vector<Monomial>& a, const std::vector<Monomial>& b) {
  std::vector<Monomial> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] * b[i]);
  return out;
}

inline const R0Factorization& require_r0(const ParamSystem& ps) {
  if (!ps.r0) throw std::invalid_argument("this builder needs R(theta) = r(theta) * R0");
  return *ps.r0;
}

/// Diagonal of R (+) O_m (+) R: entry (a, w, b) is r * (R0_a + R0_b).
inline std::vector<Monomial> padded_sum_diagonal(const R0Factorization& f, std::size_t m) {
  const auto n = static_cast<std::size_t>(f.R0.size());
  std::vector<Monomial> d;
  d.reserve(n * m * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t w = 0; w < m; ++w)
      for (std::size_t b = 0; b < n; ++b) d.push_back(f.r.scaled(f.R0(a) + f.R0(b)));
  return d;
}

inline GpProblem skeleton(const ParamSystem& ps, const Posynomial& objective, const ThetaSet& theta) {
  ps.validate();
  GpProblem p;
  p.vars = ps.vars;
  p.objective = objective;
  for (std::size_t i = 0; i < theta.constraints.size(); ++i)
    p.add(theta.constraints[i], false, aux::indexed("theta", i));
  return p;
}

inline void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument(std::string(what) + " must be positive");
}

// -------------------------------------------------------------- constraint sets
// `gain` multiplies the output-side constraint: a constant 1/gamma^k or a
// monomial in a gamma variable.

inline void h2_constraints(GpProblem& p, const ParamSystem& ps, const Monomial& gain) {
  const R0Factorization& f = require_r0(ps);
  const std::size_t n = ps.nx();
  const auto omega = declare(p, "omega", n * n);
  const auto [btilde, ctilde] = build_h2_vectors(ps.B, ps.C);
  const PosyVec out = mul(ctilde, of(omega));
  if (out[0]) p.add(*out[0] * gain, true, "h2.output");
  const PosyVec lhs = plus(mul(kron_sum_symbolic(ps.Atilde, ps.Atilde), of(omega)), column(btilde, 0));
  add_rows(p, lhs, times(omega, padded_sum_diagonal(f, 1)), "h2.state");
}

inline void hinf_constraints(GpProblem& p, const ParamSystem& ps, const Monomial& gain) {
  const auto u = declare(p, "u", ps.nw()), v = declare(p, "v", ps.ny());
  const auto xi = declare(p, "xi", ps.nx()), zeta = declare(p, "zeta", ps.nx());
  const PosyMatrix bt = ps.B.transpose(), ct = ps.C.transpose(), at = ps.Atilde.transpose();
  std::vector<Monomial> gv, gu;
  for (const auto& m : v) gv.push_back(m / gain);
  for (const auto& m : u) gu.push_back(m / gain);
  add_rows(p, mul(ps.C, of(xi)), gv, "hinf.output");
  add_rows(p, plus(mul(ps.Atilde, of(xi)), mul(ps.B, of(u))), times(xi, ps.R.diagonal()), "hinf.state");
  add_rows(p, mul(bt, of(zeta)), gu, "hinf.input");
  add_rows(p, plus(mul(at, of(zeta)), mul(ct, of(v))), times(zeta, ps.R.diagonal()), "hinf.costate");
}

inline void hankel_constraints(GpProblem& p, const ParamSystem& ps, const Monomial& gain) {
  const R0Factorization& f = require_r0(ps);
  const std::size_t n = ps.nx(), nw = ps.nw(), ny = ps.ny();
  const auto v = declare(p, "v", n);
  const auto w1 = declare(p, "omega1", n * n * nw), w2 = declare(p, "omega2", n * n * ny);
  const auto bar = build_bar_matrices(ps.B, ps.C);
  const PosyMatrix at = ps.Atilde.transpose();
  const PosyMatrix kc = kron_sum_padded(ps.Atilde, nw, at), ko = kron_sum_padded(at, ny, ps.Atilde);
  std::vector<Monomial> gv;
  for (const auto& m : v) gv.push_back(m / gain);
  add_rows(p, mul(bar.B1, of(w1)), gv, "hankel.top");
  add_rows(p, plus(mul(bar.B2, mul(bar.C1, of(w2))), mul(kc, of(w1))), times(w1, padded_sum_diagonal(f, nw)),
           "hankel.ctrl");
  add_rows(p, plus(mul(ko, of(w2)), mul(bar.C2, of(v))), times(w2, padded_sum_diagonal(f, ny)), "hankel.obs");
}

/// sum_i gamma_i < gamma^p with gamma_i > e_i^T (W_C W_O)^{p/2} e_i, each
/// diagonal entry unrolled into an alternating chain of p vectors.
inline void schatten_constraints(GpProblem& p, const ParamSystem& ps, int order, const Monomial& gain) {
  if (order < 2 || order % 2 != 0) throw std::invalid_argument("Schatten order must be an even integer >= 2");
  const R0Factorization& f = require_r0(ps);
  const std::size_t n = ps.nx(), nw = ps.nw(), ny = ps.ny();
  const auto diag = declare(p, "gamma_i", n);
  const auto bar = build_bar_matrices(ps.B, ps.C);
  const PosyMatrix at = ps.Atilde.transpose();
  const PosyMatrix kc = kron_sum_padded(ps.Atilde, nw, at), ko = kron_sum_padded(at, ny, ps.Atilde);
  const auto dc = padded_sum_diagonal(f, nw), dobs = padded_sum_diagonal(f, ny);

  std::vector<Monomial> total;
  for (const auto& g : diag) total.push_back(g * gain);
  p.add(Posynomial(total), true, "schatten.sum");

  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::vector<Monomial>> chain;
    for (int k = 1; k <= order; ++k)
      chain.push_back(declare(p, "omega" + std::to_string(i) + "_" + std::to_string(k), n * n * (k % 2 ? nw : ny)));
    const std::string tag = "schatten[" + std::to_string(i) + "].";
    const PosyVec top = mul(bar.B1, of(chain[0]));
    if (top[i]) p.add(*top[i] / diag[i], true, tag + "top");
    for (int k = 1; k <= order; ++k) {
      const auto& w = chain[k - 1];
      PosyVec lhs;
      if (k % 2 == 1) {
        lhs = plus(mul(bar.B2, mul(bar.C1, of(chain[k]))), mul(kc, of(w)));
      } else if (k < order) {
        lhs = plus(mul(bar.C2, mul(bar.B1, of(chain[k]))), mul(ko, of(w)));
      } else {
        lhs = plus(mul(ko, of(w)), column(bar.C2, i));
      }
      add_rows(p, lhs, times(w, k % 2 ? dc : dobs), tag + "link" + std::to_string(k));
    }
  }
}

/// `sqrt_eps` absent means eps = 0; decay = 0 drops the shift terms.
inline void robust_constraints(GpProblem& p, const ParamSystem& ps, const BlockPattern& pattern,
                               const std::optional<Monomial>& sqrt_eps, double decay) {
  const std::size_t m = pattern.size();
  if (ps.nw() != m || ps.ny() != m)
    throw std::invalid_argument("uncertainty structure has size " + std::to_string(m) + " but n_w = " +
                                std::to_string(ps.nw()) + ", n_y = " + std::to_string(ps.ny()));
  if (decay < 0.0 || !std::isfinite(decay)) throw std::invalid_argument("decay rate must be nonnegative");
  const auto xi = declare(p, "xi", ps.nx()), zeta = declare(p, "zeta", ps.nx());
  const PosyMatrix at = ps.Atilde.transpose();
  PosyVec state = mul(ps.Atilde, of(xi)), costate = mul(at, of(zeta));
  if (decay > 0.0) {
    for (std::size_t i = 0; i < ps.nx(); ++i) {
      state[i] = add_opt(state[i], Posynomial(xi[i].scaled(decay)));
      costate[i] = add_opt(costate[i], Posynomial(zeta[i].scaled(decay)));
    }
  }
  if (sqrt_eps) {
    // scalings and loop signals only exist with a nonzero uncertainty; left
    // unconstrained they would stall the centering steps
    const auto pi = declare(p, "pi", pattern.num_blocks());
    const auto u = declare(p, "u", m), v = declare(p, "v", m);
    const auto owner = pattern.owner();
    std::vector<Monomial> half, neg_half;
    for (std::size_t j = 0; j < m; ++j) {
      half.push_back(pi[owner[j]].pow(0.5));
      neg_half.push_back(pi[owner[j]].pow(-0.5));
    }
    const auto scaled_in = times(neg_half, u), scaled_out = times(half, v);
    std::vector<Monomial> out_den, in_den;
    for (std::size_t j = 0; j < m; ++j) {
      out_den.push_back(v[j] / (*sqrt_eps * half[j]));
      in_den.push_back(u[j] / (*sqrt_eps * neg_half[j]));
    }
    add_rows(p, mul(ps.C, of(xi)), out_den, "robust.output");
    add_rows(p, mul(ps.B.transpose(), of(zeta)), in_den, "robust.input");
    PosyVec fwd = mul(ps.B, of(scaled_in)), bwd = mul(ps.C.transpose(), of(scaled_out));
    for (auto& e : fwd)
      if (e) e = *e * Posynomial(*sqrt_eps);
    for (auto& e : bwd)
      if (e) e = *e * Posynomial(*sqrt_eps);
    state = plus(state, fwd);
    costate = plus(costate, bwd);
  }
  add_rows(p, state, times(xi, ps.R.diagonal()), "robust.state");
  add_rows(p, costate, times(zeta, ps.R.diagonal()), "robust.costate");
}

inline void require_monotone(const TradeoffFn& fn, std::size_t arg, Monotonicity want) {
  const Monotonicity got = fn.monotonicity(arg);
  if (got != want && got != Monotonicity::Constant)
    throw std::invalid_argument("tradeoff function must be " + std::string(to_string(want)) + " in '" +
                                fn.args.at(arg) + "', found " + to_string(got));
}

}  // namespace detail

// -------------------------------------------------------------------- builders

inline GpProblem build_h2_gp(const ParamSystem& ps, const CostSpec& cost, const ThetaSet& theta, double gamma2) {
  detail::require_positive(gamma2, "gamma2");
  GpProblem p = detail::skeleton(ps, cost.Ltilde, theta);
  detail::h2_constraints(p, ps, Monomial(1.0 / (gamma2 * gamma2)));
  return p;
}

inline GpProblem build_hinf_gp(const ParamSystem& ps, const CostSpec& cost, const ThetaSet& theta, double gamma_inf) {
  detail::require_positive(gamma_inf, "gamma_inf");
  GpProblem p = detail::skeleton(ps, cost.Ltilde, theta);
  detail::hinf_constraints(p, ps, Monomial(1.0 / gamma_inf));
  return p;
}

/// alpha(gamma2, gammainf) < gamma with both gains as decision variables.
inline GpProblem build_mixed_gp(const ParamSystem& ps, const CostSpec& cost, const ThetaSet& theta,
                                const TradeoffFn& alpha, double gamma) {
  detail::require_positive(gamma, "gamma");
  for (std::size_t i = 0; i < alpha.args.size(); ++i)
    detail::require_monotone(alpha, i, Monotonicity::Nondecreasing);
  const Posynomial bound = alpha.bind({aux::kGamma2, aux::kGammaInf});
  GpProblem p = detail::skeleton(ps, cost.Ltilde, theta);
  const Monomial g2 = detail::declare_scalar(p, aux::kGamma2), ginf = detail::declare_scalar(p, aux::kGammaInf);
  p.add(bound * (1.0 / gamma), true, "mixed.tradeoff");
  detail::h2_constraints(p, ps, g2.pow(-2));
  detail::hinf_constraints(p, ps, ginf.reciprocal());
  return p;
}

inline GpProblem build_hankel_gp(const ParamSystem& ps, const CostSpec& cost, const ThetaSet& theta, double gamma) {
  detail::require_positive(gamma, "gamma");
  GpProblem p = detail::skeleton(ps, cost.Ltilde, theta);
  detail::hankel_constraints(p, ps, Monomial(1.0 / (gamma * gamma)));
  return p;
}

inline GpProblem build_schatten_gp(const ParamSystem& ps, const CostSpec& cost, const ThetaSet& theta, int order,
                                   double gamma) {
  detail::require_positive(gamma, "gamma");
  GpProblem p = detail::skeleton(ps, cost.Ltilde, theta);
  detail::schatten_constraints(p, ps, order, Monomial(std::pow(gamma, -order)));
  return p;
}

/// Worst-case decay over the structured uncertainty set exceeds `gamma`.
inline GpProblem build_robust_gp(const ParamSystem& ps, const CostSpec& cost, const ThetaSet& theta,
                                 const UncertaintyStructure& unc, double gamma) {
  if (unc.eps < 0.0 || !std::isfinite(unc.eps)) throw std::invalid_argument("eps must be nonnegative");
  GpProblem p = detail::skeleton(ps, cost.Ltilde, theta);
  std::optional<Monomial> sqrt_eps;
  if (unc.eps > 0.0) sqrt_eps = Monomial(std::sqrt(unc.eps));
  detail::robust_constraints(p, ps, unc.pattern, sqrt_eps, gamma);
  return p;
}

/// Largest uncertainty size for which decay `gamma` is achievable: minimize 1/eps.
inline GpProblem build_robust_epsmax(const ParamSystem& ps, const ThetaSet& theta, const BlockPattern& pattern,
                                     double gamma) {
  GpProblem p = detail::skeleton(ps, Posynomial(1.0), theta);
  const Monomial eps = detail::declare_scalar(p, aux::kEps);
  p.objective = Posynomial(eps.reciprocal());
  detail::robust_constraints(p, ps, pattern, eps.pow(0.5), gamma);
  return p;
}

/// Delayed system with tradeoff beta(rho, l1, linf) < gamma. The exponential
/// factor e^{rho h} - 1 stays symbolic until normalization.
inline GpProblem build_delay_gp(const ParamSystem& ps, const CostSpec& cost, const ThetaSet& theta,
                                const TradeoffFn& beta, double gamma, const DelayGpOptions& opts = {}) {
  detail::require_positive(gamma, "gamma");
  if (!ps.delay) throw std::invalid_argument("delay GP needs Ad, Cd and h");
  if (beta.args.size() != 3) throw std::invalid_argument("delay tradeoff function takes (rho, l1, linf)");
  detail::require_monotone(beta, 0, Monotonicity::Nonincreasing);
  detail::require_monotone(beta, 1, Monotonicity::Nondecreasing);
  detail::require_monotone(beta, 2, Monotonicity::Nondecreasing);
  const Posynomial bound = beta.bind({aux::kRho, aux::kGamma1, aux::kGammaInf});

  GpProblem p = detail::skeleton(ps, cost.Ltilde, theta);
  const std::size_t n = ps.nx();
  const auto xi = detail::declare(p, "xi", n), u = detail::declare(p, "u", n), v = detail::declare(p, "v", n);
  const Monomial rho = detail::declare_scalar(p, aux::kRho);
  detail::declare_scalar(p, aux::kGamma1);
  detail::declare_scalar(p, aux::kGammaInf);
  const Monomial g1 = Monomial::variable(aux::kGamma1), ginf = Monomial::variable(aux::kGammaInf);
  p.add(bound * (1.0 / gamma), true, "delay.tradeoff");

  const ParamDelay& d = *ps.delay;
  const auto rxi = detail::times(xi, ps.R.diagonal());
  const detail::PosyVec ax = detail::mul(ps.Atilde, detail::of(xi)), dx = detail::mul(d.Ad, detail::of(xi));
  for (std::size_t i = 0; i < n; ++i) {
    const Posynomial base = add_opt(ax[i], Posynomial(rho * xi[i])).value() / rxi[i];
    const std::string label = aux::indexed("delay.decay", i);
    if (dx[i])
      p.exp_constraints.push_back({base, rho, d.h, *dx[i] / rxi[i], true, label});
    else
      p.add(base, true, label);
  }

  const PosyMatrix out = ps.C + d.Cd;
  detail::add_rows(p, detail::plus(detail::mul(ps.Atilde.transpose(), detail::of(u)), detail::row_sums(out.transpose())),
                   detail::times(u, ps.R.diagonal()), "delay.l1");
  std::vector<Monomial> g1s(ps.nw(), g1), ginfs(ps.ny(), ginf);
  detail::add_rows(p, detail::mul(ps.B.transpose(), detail::of(u)), g1s, "delay.l1_gain");
  detail::add_rows(p, detail::plus(detail::mul(ps.Atilde, detail::of(v)), detail::row_sums(ps.B)),
                   detail::times(v, ps.R.diagonal()), "delay.linf");
  detail::add_rows(p, detail::mul(out, detail::of(v)), ginfs, "delay.linf_gain");
  if (opts.rho_cap > 0.0) p.add(Posynomial(rho.scaled(d.h / opts.rho_cap)), false, "delay.rho_cap");
  return p;
}

// ------------------------------------------------------------------ min gamma

enum class NormKind { H2, Hinf, Hankel, Schatten };

inline const char* to_string(NormKind k) {
  switch (k) {
    case NormKind::H2: return "h2";
    case NormKind::Hinf: return "hinf";
    case NormKind::Hankel: return "hankel";
    case NormKind::Schatten: return "schatten";
  }
  return "?";
}

/// Minimize the certified norm bound "gamma[]", optionally with the cost
/// budget Ltilde <= budget + L0.
inline GpProblem build_min_gamma_gp(const ParamSystem& ps, const CostSpec& cost, const ThetaSet& theta, NormKind kind,
                                    std::optional<double> budget = std::nullopt, int schatten_order = 2) {
  GpProblem p = detail::skeleton(ps, Posynomial(1.0), theta);
  const Monomial g = detail::declare_scalar(p, aux::kGamma);
  p.objective = Posynomial(g);
  if (budget) {
    const double cap = *budget + cost.L0;
    if (!(cap > 0.0)) throw std::invalid_argument("budget + L0 must be positive");
    p.add(cost.Ltilde * (1.0 / cap), false, "budget");
  }
  switch (kind) {
    case NormKind::H2: detail::h2_constraints(p, ps, g.pow(-2)); break;
    case NormKind::Hinf: detail::hinf_constraints(p, ps, g.reciprocal()); break;
    case NormKind::Hankel: detail::hankel_constraints(p, ps, g.pow(-2)); break;
    case NormKind::Schatten:
      detail::schatten_constraints(p, ps, schatten_order, g.pow(-schatten_order));
      break;
  }
  return p;
}

// -------------------------------------------------------------------- results

/// Restrict a GP solution to the problem's own variables.
inline Point theta_part(const ParamSystem& ps, const Point& x) {
  Point t;
  for (const auto& n : ps.vars.names()) t[n] = lookup(x, n);
  return t;
}

struct Synthesis {
  SolveResult result;
  Point theta;                        // empty unless Optimal
  std::optional<double> cost;         // L(theta*) = Ltilde - L0
  std::optional<double> gain;         // value of the gamma-type objective variable, when there is one
};

inline Synthesis synthesize(const GpProblem& gp, const ParamSystem& ps, const CostSpec& cost,
                            const SolveOptions& opts = {}) {
  Synthesis s;
  s.result = solve(gp, opts);
  if (s.result.status != SolveStatus::Optimal) return s;
  s.theta = theta_part(ps, s.result.point);
  s.cost = cost.cost(s.theta);
  for (const auto& name : {aux::kGamma, aux::kEps})
    if (auto it = s.result.point.find(name); it != s.result.point.end()) s.gain = it->second;
  return s;
}

struct MinGammaResult {
  SolveResult result;
  std::optional<double> gamma;
  Point theta;
};

inline MinGammaResult minimize_gamma(const ParamSystem& ps, const CostSpec& cost, const ThetaSet& theta, NormKind kind,
                                     std::optional<double> budget = std::nullopt, int schatten_order = 2,
                                     const SolveOptions& opts = {}) {
  MinGammaResult r;
  r.result = solve(build_min_gamma_gp(ps, cost, theta, kind, budget, schatten_order), opts);
  if (r.result.status == SolveStatus::Optimal) {
    r.gamma = r.result.point.at(aux::kGamma);
    r.theta = theta_part(ps, r.result.point);
  }
  return r;
}

/// Largest decay rate gamma with (Atilde + gamma I) xi < R xi for a numeric
/// Metzler F, solved as a GP with a tiny strict margin. Converges to
/// -spectral_abscissa(F); nullopt when F is not Hurwitz.
inline std::optional<double> certify_decay(const MatrixXd& F, double strict_margin = 1e-10) {
  if (!is_metzler(F)) throw std::invalid_argument("certify_decay needs a Metzler matrix");
  const auto n = static_cast<std::size_t>(F.rows());
  const double shift = std::max(0.0, (-F.diagonal()).maxCoeff()) + 1.0;
  GpProblem p;
  const auto xi = detail::declare(p, "xi", n);
  const Monomial g = detail::declare_scalar(p, aux::kGamma);
  p.objective = Posynomial(g.reciprocal());
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Monomial> terms{g * xi[i]};
    for (std::size_t j = 0; j < n; ++j) {
      const double a = F(i, j) + (i == j ? shift : 0.0);
      if (a > 0.0) terms.push_back(xi[j].scaled(a));
    }
    p.add(Posynomial(terms) / xi[i].scaled(shift), true, aux::indexed("decay", i));
  }
  SolveOptions o;
  o.strict_margin = strict_margin;
  const SolveResult r = solve(p, o);
  if (r.status != SolveStatus::Optimal) return std::nullopt;
  return r.point.at(aux::kGamma);
}

}  // namespace posgp
