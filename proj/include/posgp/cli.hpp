#pragma once

// Command-line front end: parse a problem, build the GP, solve, certify the
// optimum with the numerical oracles and print a JSON report.
//
// Exit codes: 0 optimal (or oracle computed), 2 infeasible, 3 parse or
// validation error, 4 numeric failure or iteration limit.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "posgp/apps.hpp"
#include "posgp/gp.hpp"
#include "posgp/problem_file.hpp"
#include "posgp/report.hpp"
#include "posgp/synth.hpp"
#include "posgp/system.hpp"

namespace posgp::cli {

using report::json;

inline constexpr int kExitOptimal = 0;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitInvalid = 3;
inline constexpr int kExitNumeric = 4;

inline int exit_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return kExitOptimal;
    case SolveStatus::Infeasible: return kExitInfeasible;
    default: return kExitNumeric;
  }
}

/// Worst status of a batch: any failure beats infeasible beats optimal.
inline int combined_exit(const std::vector<SolveStatus>& all) {
  int code = kExitOptimal;
  for (auto s : all) code = std::max(code, exit_code(s));
  return code;
}

enum class Kind { H2, Hinf, Mixed, Hankel, Schatten, Robust, RobustEpsmax, Delay, MinGamma };

inline const std::vector<std::pair<std::string, Kind>>& solve_commands() {
  static const std::vector<std::pair<std::string, Kind>> c = {
      {"solve-h2", Kind::H2},          {"solve-hinf", Kind::Hinf},
      {"solve-mixed", Kind::Mixed},    {"solve-hankel", Kind::Hankel},
      {"solve-schatten", Kind::Schatten}, {"solve-robust", Kind::Robust},
      {"solve-robust-epsmax", Kind::RobustEpsmax}, {"solve-delay", Kind::Delay},
      {"min-gamma", Kind::MinGamma}};
  return c;
}

inline std::optional<Kind> find_kind(const std::string& name) {
  for (const auto& [n, k] : solve_commands())
    if (n == name) return k;
  return std::nullopt;
}

/// Flag values; unset flags fall back to the problem file.
struct Settings {
  std::optional<double> gamma, eps, budget, strict_margin;
  std::optional<int> p, series_order;
  std::uint64_t seed = 0;
  std::string norm = "hinf";
};

inline NormKind parse_norm(const std::string& s) {
  if (s == "h2") return NormKind::H2;
  if (s == "hinf") return NormKind::Hinf;
  if (s == "hankel") return NormKind::Hankel;
  if (s == "schatten") return NormKind::Schatten;
  throw std::invalid_argument("unknown norm '" + s + "' (h2, hinf, hankel, schatten)");
}

inline SolveOptions solve_options(std::optional<double> margin, std::optional<int> series) {
  SolveOptions o;
  if (margin) o.strict_margin = *margin;
  if (series) o.delay_series_order = *series;
  if (const char* env = std::getenv("POSGP_MAX_ITERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) throw std::invalid_argument("POSGP_MAX_ITERS must be a positive integer");
    o.max_iters = static_cast<int>(v);
  }
  o.validate();
  return o;
}

/// a:step:b, both ends included (up to rounding of the step count).
inline std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= spec.size(); ++i)
    if (i == spec.size() || spec[i] == ':') {
      double v = 0.0;
      if (!posgp::detail::parse_double(std::string_view(spec).substr(start, i - start), v))
        throw std::invalid_argument("grid must look like a:step:b, got '" + spec + "'");
      parts.push_back(v);
      start = i + 1;
    }
  if (parts.size() != 3 || !(parts[1] > 0.0) || parts[2] < parts[0])
    throw std::invalid_argument("grid must look like a:step:b with step > 0 and a <= b");
  const auto count = static_cast<std::size_t>(std::floor((parts[2] - parts[0]) / parts[1] + 1e-9)) + 1;
  std::vector<double> grid;
  for (std::size_t k = 0; k < count; ++k) grid.push_back(parts[0] + static_cast<double>(k) * parts[1]);
  return grid;
}

// ------------------------------------------------------------ solve + check

namespace detail {

inline double require(std::optional<double> flag, std::optional<double> file, const char* what) {
  if (flag) return *flag;
  if (file) return *file;
  throw std::invalid_argument(std::string(what) + " is required (flag or problem file)");
}

inline std::vector<int> schatten_orders(int p) {
  std::set<int> s{2, p};
  return {s.begin(), s.end()};
}

inline json gains(const Point& x) {
  json g = json::object();
  for (const auto& name : {aux::kGamma, aux::kGamma2, aux::kGammaInf, aux::kGamma1, aux::kRho, aux::kEps})
    if (auto it = x.find(name); it != x.end()) g[name.substr(0, name.size() - 2)] = report::number(it->second);
  return g;
}

}  // namespace detail

/// Build, solve and certify one problem. The returned record carries status,
/// solution, per-constraint slack, diagnostics and (when optimal) the oracle.
inline json solve_record(Kind kind, const ProblemBundle& b, const Settings& s, SolveStatus& status) {
  const SolveOptions opts = solve_options(s.strict_margin ? s.strict_margin : b.strict_margin,
                                          s.series_order ? s.series_order : b.series_order);
  const int order = s.p.value_or(b.schatten_p.value_or(2));
  json settings = json::object();
  auto gamma = [&] {
    const double g = detail::require(s.gamma, b.gamma, "gamma");
    settings["gamma"] = g;
    return g;
  };
  auto pattern = [&] {
    if (!b.blocks) throw std::invalid_argument("uncertainty blocks are required (full_blocks / scalar_blocks)");
    return *b.blocks;
  };
  auto tradeoff = [&] {
    if (!b.tradeoff) throw std::invalid_argument("a tradeoff function is required (tradeoff / tradeoff_args)");
    return *b.tradeoff;
  };

  GpProblem gp;
  NormKind norm = NormKind::Hinf;
  double eps = 0.0;
  switch (kind) {
    case Kind::H2: gp = build_h2_gp(b.ps, b.cost, b.theta, gamma()); break;
    case Kind::Hinf: gp = build_hinf_gp(b.ps, b.cost, b.theta, gamma()); break;
    case Kind::Mixed: gp = build_mixed_gp(b.ps, b.cost, b.theta, tradeoff(), gamma()); break;
    case Kind::Hankel: gp = build_hankel_gp(b.ps, b.cost, b.theta, gamma()); break;
    case Kind::Schatten:
      settings["p"] = order;
      gp = build_schatten_gp(b.ps, b.cost, b.theta, order, gamma());
      break;
    case Kind::Robust:
      eps = detail::require(s.eps, b.eps, "eps");
      settings["eps"] = eps;
      gp = build_robust_gp(b.ps, b.cost, b.theta, {pattern(), eps}, gamma());
      break;
    case Kind::RobustEpsmax: gp = build_robust_epsmax(b.ps, b.theta, pattern(), gamma()); break;
    case Kind::Delay: {
      DelayGpOptions d;
      if (b.rho_cap) d.rho_cap = *b.rho_cap;
      gp = build_delay_gp(b.ps, b.cost, b.theta, tradeoff(), gamma(), d);
      break;
    }
    case Kind::MinGamma: {
      norm = parse_norm(s.norm);
      settings["norm"] = s.norm;
      const auto budget = s.budget ? s.budget : b.budget;
      if (budget) settings["budget"] = *budget;
      if (norm == NormKind::Schatten) settings["p"] = order;
      gp = build_min_gamma_gp(b.ps, b.cost, b.theta, norm, budget, order);
      break;
    }
  }
  settings["strict_margin"] = opts.strict_margin;
  if (b.ps.delay) settings["series_order"] = opts.delay_series_order;

  const SolveResult r = solve(gp, opts);
  status = r.status;
  json rec = {{"status", to_string(r.status)}, {"settings", settings}};
  if (r.status == SolveStatus::Optimal) {
    const Point theta = theta_part(b.ps, r.point);
    rec["theta"] = report::point(theta);
    rec["objective"] = report::number(r.objective_value);
    rec["cost"] = report::number(b.cost.cost(theta));
    rec["gains"] = detail::gains(r.point);
    rec["constraints"] = report::constraints(r);

    const NumericSystem sys = instantiate(b.ps, theta);
    const NormReport nr = norm_report(sys, detail::schatten_orders(order));
    json checks = json::array();
    auto val = [](const std::optional<double>& v) { return v.value_or(std::numeric_limits<double>::infinity()); };
    const double g = settings.contains("gamma") ? settings["gamma"].get<double>() : 0.0;
    switch (kind) {
      case Kind::H2: checks.push_back(report::check("h2", val(nr.h2), g)); break;
      case Kind::Hinf: checks.push_back(report::check("hinf", val(nr.hinf), g)); break;
      case Kind::Mixed: {
        const double g2 = r.point.at(aux::kGamma2), gi = r.point.at(aux::kGammaInf);
        checks.push_back(report::check("h2", val(nr.h2), g2));
        checks.push_back(report::check("hinf", val(nr.hinf), gi));
        const TradeoffFn t = tradeoff();
        checks.push_back(report::check("tradeoff", t.expr.eval({{t.args[0], val(nr.h2)}, {t.args[1], val(nr.hinf)}}), g));
        break;
      }
      case Kind::Hankel:
        checks.push_back(report::check("hankel_sv_max", nr.hankel_sv.empty() ? INFINITY : nr.hankel_sv.front(), g));
        break;
      case Kind::Schatten:
        checks.push_back(report::check("schatten", nr.stable ? nr.schatten.at(order) : INFINITY, g));
        break;
      case Kind::Robust:
      case Kind::RobustEpsmax: {
        const double e = kind == Kind::Robust ? eps : r.point.at(aux::kEps);
        const double a = robust_abscissa_estimate(sys, *b.blocks, e, 200, s.seed);
        checks.push_back(report::check("robust_abscissa", a, -g));
        break;
      }
      case Kind::Delay: {
        const double rho = r.point.at(aux::kRho);
        const double g1 = r.point.at(aux::kGamma1), gi = r.point.at(aux::kGammaInf);
        checks.push_back(report::check("l1_gain", val(nr.l1_gain), g1));
        checks.push_back(report::check("linf_gain", val(nr.linf_gain), gi));
        const bool decays = nr.stable && delay_decay_check(sys, rho * (1.0 - 1e-6));
        checks.push_back({{"quantity", "decay_at_rho"}, {"value", rho * (1.0 - 1e-6)}, {"holds", decays}});
        const TradeoffFn t = tradeoff();
        const double beta = t.expr.eval({{t.args[0], nr.decay_rate_lb.value_or(0.0) > 0 ? *nr.decay_rate_lb : rho},
                                         {t.args[1], val(nr.l1_gain)},
                                         {t.args[2], val(nr.linf_gain)}});
        checks.push_back(report::check("tradeoff", beta, g));
        break;
      }
      case Kind::MinGamma: {
        const double star = r.point.at(aux::kGamma);
        double v = INFINITY;
        if (nr.stable) switch (norm) {
            case NormKind::H2: v = val(nr.h2); break;
            case NormKind::Hinf: v = val(nr.hinf); break;
            case NormKind::Hankel: v = nr.hankel_sv.front(); break;
            case NormKind::Schatten: v = nr.schatten.at(order); break;
          }
        checks.push_back(report::check(to_string(norm), v, star));
        break;
      }
    }
    bool certified = nr.stable || kind == Kind::Robust || kind == Kind::RobustEpsmax;
    for (const auto& c : checks) certified = certified && c["holds"].get<bool>();
    rec["oracle"] = {{"norms", report::norms(nr)}, {"checks", checks}, {"certified", certified}};
  }
  rec["diagnostics"] = report::diagnostics(r);
  return rec;
}

// --------------------------------------------------------------- commands

namespace detail {

inline void emit(const json& doc, const std::optional<std::string>& path, std::ostream& out) {
  if (path) {
    std::ofstream f(*path);
    if (!f) throw std::runtime_error("cannot write '" + *path + "'");
    f << doc.dump(2) << '\n';
  } else {
    out << doc.dump(2) << '\n';
  }
}

inline json header(const std::string& command) {
  return {{"schema_version", report::kSchemaVersion}, {"command", command}};
}

}  // namespace detail

struct Args {
  Settings settings;
  std::string input, target, theta_file;
  std::optional<std::string> out;
  std::optional<std::string> gamma_grid, eps_grid;
  // application flags
  double alpha = 0.1, bound = 5.0;
  std::optional<double> gamma_factor, eps_rel;
  double beta_min = 0.1, beta_max = 0.2, delta_min = 1.0, delta_max = 2.0, cost_p = 0.1, cost_q = 1.0;
  bool reparametrize = false, eps_max = false;
};

inline int cmd_solve(Kind kind, const std::string& name, const Args& a, std::ostream& out) {
  const ProblemBundle b = parse_problem_file(a.input);
  json doc = detail::header(name);
  doc["input"] = a.input;
  doc["problem"] = serialize_problem(b);
  SolveStatus st{};
  doc.update(solve_record(kind, b, a.settings, st));
  detail::emit(doc, a.out, out);
  return exit_code(st);
}

inline int cmd_sweep(const Args& a, std::ostream& out) {
  const auto kind = find_kind(a.target);
  if (!kind) throw std::invalid_argument("sweep target must be a solve command, got '" + a.target + "'");
  if (a.gamma_grid.has_value() == a.eps_grid.has_value())
    throw std::invalid_argument("sweep needs exactly one of --gamma-grid and --eps-grid");
  const bool over_gamma = a.gamma_grid.has_value();
  const auto grid = parse_grid(over_gamma ? *a.gamma_grid : *a.eps_grid);
  const ProblemBundle b = parse_problem_file(a.input);

  json doc = detail::header("sweep");
  doc["target"] = a.target;
  doc["input"] = a.input;
  doc["problem"] = serialize_problem(b);
  doc["parameter"] = over_gamma ? "gamma" : "eps";
  json records = json::array();
  std::vector<SolveStatus> all;
  for (double v : grid) {
    Settings s = a.settings;
    (over_gamma ? s.gamma : s.eps) = v;
    SolveStatus st{};
    json rec = {{"grid_value", v}};
    rec.update(solve_record(*kind, b, s, st));
    records.push_back(std::move(rec));
    all.push_back(st);
  }
  doc["records"] = std::move(records);
  detail::emit(doc, a.out, out);
  return combined_exit(all);
}

inline int cmd_oracle(const Args& a, std::ostream& out) {
  const ProblemBundle b = parse_problem_file(a.input);
  const Point theta = parse_theta_file(a.theta_file);
  for (const auto& [name, v] : theta)
    if (!b.ps.vars.contains(name)) throw std::invalid_argument("theta file sets unknown variable '" + name + "'");
  const NumericSystem sys = instantiate(b.ps, theta);
  const int order = a.settings.p.value_or(b.schatten_p.value_or(2));
  json doc = detail::header("oracle");
  doc["input"] = a.input;
  doc["theta"] = report::point(theta);
  json oracle = {{"norms", report::norms(norm_report(sys, detail::schatten_orders(order)))}};
  const auto eps = a.settings.eps ? a.settings.eps : b.eps;
  if (b.blocks && eps)
    oracle["robust_abscissa"] =
        report::number(robust_abscissa_estimate(sys, *b.blocks, *eps, 200, a.settings.seed));
  oracle["F"] = report::matrix(sys.F());
  doc["oracle"] = std::move(oracle);
  detail::emit(doc, a.out, out);
  return kExitOptimal;
}

inline ProblemBundle bundle_of(const ParamSystem& ps, const CostSpec& cost, const ThetaSet& theta) {
  ProblemBundle b;
  b.ps = ps;
  b.cost = cost;
  b.theta = theta;
  return b;
}

inline int cmd_buffer(const Args& a, std::ostream& out) {
  BufferNetwork bn = BufferNetwork::uniform_bounds(parse_edge_list_file(a.input), a.bound, a.alpha);
  const BufferProblem prob = build_buffer_network(bn);
  ProblemBundle b = bundle_of(prob.ps, prob.cost, prob.theta);
  const SolveOptions opts = solve_options(a.settings.strict_margin, std::nullopt);

  json doc = detail::header("buffer-net");
  doc["input"] = a.input;
  doc["warnings"] = prob.warnings;
  json nodes = json::array();
  for (std::size_t i = 0; i < bn.graph.nodes; ++i)
    nodes.push_back({{"node", i}, {"variable", buffer_variable(bn, i)}, {"destination", bn.is_destination(i)}});
  doc["nodes"] = std::move(nodes);

  const MinGammaResult best = minimize_gamma(prob.ps, prob.cost, prob.theta, NormKind::Hinf, std::nullopt, 2, opts);
  doc["gamma_star_status"] = to_string(best.result.status);
  if (best.gamma) doc["gamma_star"] = *best.gamma;
  if (!a.settings.gamma && !a.gamma_factor) {
    doc["problem"] = serialize_problem(b);
    detail::emit(doc, a.out, out);
    return exit_code(best.result.status);
  }
  if (a.gamma_factor) {
    if (!best.gamma) throw std::runtime_error("gamma factor given but the minimum H-infinity bound was not found");
    b.gamma = *a.gamma_factor * *best.gamma;
  } else {
    b.gamma = *a.settings.gamma;
  }
  doc["problem"] = serialize_problem(b);
  Settings s = a.settings;
  s.gamma.reset();
  SolveStatus st{};
  doc.update(solve_record(Kind::Hinf, b, s, st));
  detail::emit(doc, a.out, out);
  return exit_code(st);
}

inline int cmd_sis(const Args& a, std::ostream& out) {
  SisNetwork sn;
  sn.adjacency = parse_edge_list_file(a.input).adjacency();
  const double norm = sn.adjacency.rows() ? sn.adjacency.jacobiSvd().singularValues()(0) : 0.0;
  if (a.settings.eps && a.eps_rel) throw std::invalid_argument("give either --eps or --eps-rel");
  sn.eps = a.settings.eps ? *a.settings.eps : a.eps_rel.value_or(0.0) * norm;
  sn.gamma = a.settings.gamma.value_or(0.01);
  sn.beta_lo = a.beta_min, sn.beta_hi = a.beta_max;
  sn.delta_lo = a.delta_min, sn.delta_hi = a.delta_max;
  sn.p = a.cost_p, sn.q = a.cost_q;
  const SisProblem prob = build_sis_problem(sn, a.reparametrize);
  ProblemBundle b = bundle_of(prob.ps, prob.cost, prob.theta);
  b.blocks = prob.uncertainty.pattern;
  b.eps = sn.eps;
  b.gamma = sn.gamma;

  json doc = detail::header("sis");
  doc["input"] = a.input;
  doc["problem"] = serialize_problem(b);
  doc["adjacency_norm"] = norm;
  doc["reparametrized"] = a.reparametrize;
  std::vector<SolveStatus> all;
  if (a.eps_max) {
    const SolveResult r = solve(build_robust_epsmax(prob.ps, prob.theta, prob.uncertainty.pattern, sn.gamma),
                                solve_options(a.settings.strict_margin, std::nullopt));
    doc["eps_star_status"] = to_string(r.status);
    if (r.status == SolveStatus::Optimal) {
      doc["eps_star"] = r.point.at(aux::kEps);
      if (norm > 0.0) doc["eps_star_relative"] = r.point.at(aux::kEps) / norm;
    }
    all.push_back(r.status);
  }
  Settings s = a.settings;
  s.gamma.reset();
  s.eps.reset();
  SolveStatus st{};
  doc.update(solve_record(Kind::Robust, b, s, st));
  all.push_back(st);
  if (st == SolveStatus::Optimal) {
    Point sol;
    for (const auto& [k, v] : doc["theta"].items()) sol[k] = v.get<double>();
    doc["nominal_decay"] = -spectral_abscissa(sis_generator(sn, sol));
    json inv = json::array();
    for (const auto& row : sis_investments(sn, sol))
      inv.push_back({{"node", row.node},
                     {"infection_cost", row.infection},
                     {"recovery_cost", row.recovery},
                     {"pagerank", row.centrality}});
    doc["investments"] = std::move(inv);
  }
  detail::emit(doc, a.out, out);
  return combined_exit(all);
}

// --------------------------------------------------------------------- run

inline int run(const std::vector<std::string>& argv_in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tune parameters of positive linear systems by geometric programming", "posgp"};
  app.require_subcommand(1);
  Args a;
  Settings& s = a.settings;

  auto common = [&](CLI::App* sc) {
    sc->add_option("--strict-margin", s.strict_margin, "strict inequalities become f <= 1 - margin");
    sc->add_option("--seed", s.seed, "seed for sampling oracles")->capture_default_str();
    sc->add_option("--out", a.out, "write the report here instead of stdout");
  };
  auto problem_flags = [&](CLI::App* sc) {
    sc->add_option("--gamma", s.gamma, "norm bound / decay rate (overrides the file)");
    sc->add_option("--eps", s.eps, "uncertainty size (overrides the file)");
    sc->add_option("--p", s.p, "Schatten order (even)");
    sc->add_option("--budget", s.budget, "cost budget for min-gamma");
    sc->add_option("--series-order", s.series_order, "terms kept in the delay exponential series");
    sc->add_option("--norm", s.norm, "norm for min-gamma: h2, hinf, hankel, schatten")->capture_default_str();
    common(sc);
  };

  std::vector<std::pair<CLI::App*, Kind>> solvers;
  for (const auto& [name, kind] : solve_commands()) {
    CLI::App* sc = app.add_subcommand(name, "solve one synthesis problem");
    sc->add_option("problem", a.input, "problem file")->required();
    problem_flags(sc);
    solvers.emplace_back(sc, kind);
  }

  CLI::App* sweep = app.add_subcommand("sweep", "solve over a grid of gamma or eps values");
  sweep->add_option("target", a.target, "solve command to repeat")->required();
  sweep->add_option("problem", a.input, "problem file")->required();
  sweep->add_option("--gamma-grid", a.gamma_grid, "a:step:b");
  sweep->add_option("--eps-grid", a.eps_grid, "a:step:b");
  problem_flags(sweep);

  CLI::App* oracle = app.add_subcommand("oracle", "evaluate the system norms at a given point");
  oracle->add_option("problem", a.input, "problem file")->required();
  oracle->add_option("--theta-file", a.theta_file, "parameter values, one 'name value' per line")->required();
  oracle->add_option("--p", s.p, "Schatten order");
  oracle->add_option("--eps", s.eps, "uncertainty size for the robust abscissa");
  common(oracle);

  CLI::App* buffer = app.add_subcommand("buffer-net", "H-infinity tuning of a buffer network from an edge list");
  buffer->add_option("graph", a.input, "edge list")->required();
  buffer->add_option("--alpha", a.alpha, "weight of the flow outputs")->capture_default_str();
  buffer->add_option("--bound", a.bound, "upper bound on every phi and psi")->capture_default_str();
  buffer->add_option("--gamma", s.gamma, "H-infinity bound");
  buffer->add_option("--gamma-factor", a.gamma_factor, "H-infinity bound as a multiple of the minimum");
  common(buffer);

  CLI::App* sis = app.add_subcommand("sis", "robust SIS resource allocation from an edge list");
  sis->add_option("graph", a.input, "edge list (src infects dst)")->required();
  sis->add_option("--gamma", s.gamma, "required decay rate (default 0.01)");
  sis->add_option("--eps", s.eps, "absolute uncertainty size");
  sis->add_option("--eps-rel", a.eps_rel, "uncertainty size relative to the adjacency norm");
  sis->add_option("--beta-min", a.beta_min)->capture_default_str();
  sis->add_option("--beta-max", a.beta_max)->capture_default_str();
  sis->add_option("--delta-min", a.delta_min)->capture_default_str();
  sis->add_option("--delta-max", a.delta_max)->capture_default_str();
  sis->add_option("--cost-p", a.cost_p, "infection cost exponent")->capture_default_str();
  sis->add_option("--cost-q", a.cost_q, "recovery cost exponent")->capture_default_str();
  sis->add_flag("--reparametrize", a.reparametrize, "use the constant-R parametrization of the recovery rates");
  sis->add_flag("--eps-max", a.eps_max, "also compute the largest tolerable uncertainty");
  common(sis);

  std::vector<std::string> storage{"posgp"};
  storage.insert(storage.end(), argv_in.begin(), argv_in.end());
  std::vector<char*> argv;
  for (auto& x : storage) argv.push_back(x.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    for (const auto& [sc, kind] : solvers)
      if (sc->parsed()) return cmd_solve(kind, sc->get_name(), a, out);
    if (sweep->parsed()) return cmd_sweep(a, out);
    if (oracle->parsed()) return cmd_oracle(a, out);
    if (buffer->parsed()) return cmd_buffer(a, out);
    if (sis->parsed()) return cmd_sis(a, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitInvalid;
}

}  // namespace posgp::cli
