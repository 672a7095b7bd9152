#pragma once

// Application models: dynamical buffer (flow) networks and networked SIS
// epidemics, each translated into a ParamSystem + cost + constraint set.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "posgp/posynomial.hpp"
#include "posgp/synth.hpp"
#include "posgp/system.hpp"

namespace posgp {

// ----------------------------------------------------------------- graphs

struct Edge {
  std::size_t from = 0;
  std::size_t to = 0;
  std::optional<double> weight;  // absent: application default
  bool operator==(const Edge& o) const { return from == o.from && to == o.to && weight == o.weight; }
};

struct Graph {
  std::size_t nodes = 0;
  std::vector<Edge> edges;

  void validate() const {
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& e : edges) {
      if (e.from >= nodes || e.to >= nodes) throw std::invalid_argument("edge endpoint out of range");
      if (e.from == e.to) throw std::invalid_argument("self-loop at node " + std::to_string(e.from));
      if (e.weight && !(*e.weight > 0.0 && std::isfinite(*e.weight)))
        throw std::invalid_argument("edge weights must be positive");
      if (!seen.insert({e.from, e.to}).second)
        throw std::invalid_argument("duplicate edge " + std::to_string(e.from) + " -> " + std::to_string(e.to));
    }
  }

  std::vector<std::size_t> out_degree() const {
    std::vector<std::size_t> d(nodes, 0);
    for (const auto& e : edges) ++d[e.from];
    return d;
  }
  std::vector<std::size_t> in_degree() const {
    std::vector<std::size_t> d(nodes, 0);
    for (const auto& e : edges) ++d[e.to];
    return d;
  }

  /// A(to, from) = weight (1 when absent): column j lists the nodes j reaches.
  Eigen::MatrixXd adjacency() const {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nodes), static_cast<Eigen::Index>(nodes));
    for (const auto& e : edges) a(static_cast<Eigen::Index>(e.to), static_cast<Eigen::Index>(e.from)) = e.weight.value_or(1.0);
    return a;
  }
};

namespace graphs {

inline void undirected(Graph& g, std::size_t a, std::size_t b) {
  g.edges.push_back({a, b, std::nullopt});
  g.edges.push_back({b, a, std::nullopt});
}

inline Graph ring(std::size_t n) {
  Graph g{n, {}};
  if (n < 3) throw std::invalid_argument("ring needs at least 3 nodes");
  for (std::size_t i = 0; i < n; ++i) undirected(g, i, (i + 1) % n);
  return g;
}

/// Hub 0 linked both ways to every leaf.
inline Graph star(std::size_t n) {
  Graph g{n, {}};
  for (std::size_t i = 1; i < n; ++i) undirected(g, 0, i);
  return g;
}

/// Directed path 0 -> 1 -> ... -> n-1.
inline Graph chain(std::size_t n) {
  Graph g{n, {}};
  for (std::size_t i = 0; i + 1 < n; ++i) g.edges.push_back({i, i + 1, std::nullopt});
  return g;
}

/// Edges only go from lower to higher index. Nodes 0..origins-1 get no
/// in-edges and the last `destinations` nodes no out-edges; every other node
/// gets at least one of each, so all sources and sinks are the intended ones.
inline Graph random_dag(std::size_t n, double p, std::uint64_t seed, std::size_t origins = 2,
                        std::size_t destinations = 2) {
  if (origins + destinations > n || origins == 0 || destinations == 0)
    throw std::invalid_argument("random_dag: bad origin/destination counts");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const std::size_t first_dest = n - destinations;
  std::set<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i < first_dest; ++i)
    for (std::size_t j = std::max(i + 1, origins); j < n; ++j)
      if (coin(rng) < p) e.insert({i, j});
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(coin(rng) * static_cast<double>(hi - lo)) % (hi - lo);
  };
  for (std::size_t i = 0; i < first_dest; ++i) {
    bool has_out = std::any_of(e.begin(), e.end(), [&](auto& x) { return x.first == i; });
    if (!has_out) e.insert({i, pick(std::max(i + 1, origins), n)});
  }
  for (std::size_t j = origins; j < n; ++j) {
    bool has_in = std::any_of(e.begin(), e.end(), [&](auto& x) { return x.second == j; });
    if (!has_in) e.insert({pick(0, std::min(j, first_dest)), j});
  }
  Graph g{n, {}};
  for (auto [a, b] : e) g.edges.push_back({a, b, std::nullopt});
  return g;
}

/// Undirected G(n, p), stored with both edge directions.
inline Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  Graph g{n, {}};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (coin(rng) < p) undirected(g, i, j);
  return g;
}

}  // namespace graphs

/// Power iteration with uniform teleport; dangling nodes spread uniformly.
/// `adjacency(i, j) > 0` is a link from j to i.
inline Eigen::VectorXd pagerank(const Eigen::MatrixXd& adjacency, double damping = 0.85, double tol = 1e-12,
                                int max_iters = 1000) {
  const Eigen::Index n = adjacency.rows();
  if (adjacency.cols() != n || n == 0) throw std::invalid_argument("pagerank needs a nonempty square matrix");
  const Eigen::VectorXd out = adjacency.colwise().sum().transpose();
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  for (int it = 0; it < max_iters; ++it) {
    Eigen::VectorXd next = Eigen::VectorXd::Zero(n);
    double dangling = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (out(j) > 0.0)
        next += adjacency.col(j) * (x(j) / out(j));
      else
        dangling += x(j);
    }
    next = damping * (next.array() + dangling / static_cast<double>(n)).matrix();
    next.array() += (1.0 - damping) / static_cast<double>(n);
    const double change = (next - x).lpNorm<1>();
    x = next;
    if (change < tol) break;
  }
  return x;
}

// --------------------------------------------------------- buffer network

struct BufferNetwork {
  Graph graph;            // edge i -> j carries flow u_ij = psi_i w_ij x_i
  double alpha = 0.1;     // weight of the flow outputs; 0 drops them
  std::vector<double> phi_max;  // per node; only destinations are read
  std::vector<double> psi_max;  // per node; only non-destinations are read

  std::vector<std::size_t> origins() const {
    const auto d = graph.in_degree();
    std::vector<std::size_t> o;
    for (std::size_t i = 0; i < graph.nodes; ++i)
      if (d[i] == 0) o.push_back(i);
    return o;
  }
  std::vector<std::size_t> destinations() const {
    const auto d = graph.out_degree();
    std::vector<std::size_t> o;
    for (std::size_t i = 0; i < graph.nodes; ++i)
      if (d[i] == 0) o.push_back(i);
    return o;
  }
  bool is_destination(std::size_t i) const { return graph.out_degree()[i] == 0; }

  /// Edge weights with the 1/|out-neighbours| default filled in.
  std::vector<double> weights() const {
    const auto d = graph.out_degree();
    std::vector<double> w;
    for (const auto& e : graph.edges) w.push_back(e.weight.value_or(1.0 / static_cast<double>(d[e.from])));
    return w;
  }

  void validate() const {
    graph.validate();
    if (graph.nodes == 0) throw std::invalid_argument("buffer network has no nodes");
    if (origins().empty()) throw std::invalid_argument("buffer network needs at least one origin");
    if (destinations().empty()) throw std::invalid_argument("buffer network needs at least one destination");
    if (!(alpha >= 0.0 && std::isfinite(alpha))) throw std::invalid_argument("alpha must be nonnegative");
    if (phi_max.size() != graph.nodes || psi_max.size() != graph.nodes)
      throw std::invalid_argument("phi_max and psi_max need one entry per node");
    for (std::size_t i = 0; i < graph.nodes; ++i) {
      const double b = is_destination(i) ? phi_max[i] : psi_max[i];
      if (!(b > 0.0 && std::isfinite(b))) throw std::invalid_argument("parameter bounds must be positive");
    }
  }

  static BufferNetwork uniform_bounds(Graph g, double bound = 5.0, double alpha = 0.1) {
    const std::size_t n = g.nodes;
    return BufferNetwork{std::move(g), alpha, std::vector<double>(n, bound), std::vector<double>(n, bound)};
  }
};

struct BufferProblem {
  ParamSystem ps;
  CostSpec cost;
  ThetaSet theta;
  std::vector<std::string> warnings;
};

inline std::string buffer_variable(const BufferNetwork& bn, std::size_t node) {
  return (bn.is_destination(node) ? "phi" : "psi") + std::to_string(node);
}

inline BufferProblem build_buffer_network(const BufferNetwork& bn) {
  bn.validate();
  const std::size_t n = bn.graph.nodes;
  const auto w = bn.weights();
  const auto origins = bn.origins();
  BufferProblem out;
  ParamSystem& ps = out.ps;

  std::vector<Monomial> param;
  for (std::size_t i = 0; i < n; ++i) {
    param.push_back(Monomial::variable(buffer_variable(bn, i)));
    ps.vars.add(buffer_variable(bn, i));
  }

  ps.Atilde = PosyMatrix(n, n);
  std::vector<double> out_weight(n, 0.0);
  for (std::size_t e = 0; e < bn.graph.edges.size(); ++e) {
    const auto& edge = bn.graph.edges[e];
    ps.Atilde.set(edge.to, edge.from, Posynomial(param[edge.from].scaled(w[e])));
    out_weight[edge.from] += w[e];
  }
  std::vector<Monomial> r;
  for (std::size_t i = 0; i < n; ++i) r.push_back(bn.is_destination(i) ? param[i] : param[i].scaled(out_weight[i]));
  ps.R = DiagMonoMatrix(r);

  ps.B = PosyMatrix(n, origins.size());
  for (std::size_t k = 0; k < origins.size(); ++k) ps.B.set(origins[k], k, Posynomial(1.0));

  const std::size_t flows = bn.alpha > 0.0 ? bn.graph.edges.size() : 0;
  ps.C = PosyMatrix(n + flows, n);
  for (std::size_t i = 0; i < n; ++i) ps.C.set(i, i, Posynomial(1.0));
  for (std::size_t e = 0; e < flows; ++e) {
    const std::size_t from = bn.graph.edges[e].from;
    ps.C.set(n + e, from, Posynomial(param[from].scaled(bn.alpha * w[e])));
  }
  ps.validate();

  std::vector<Monomial> total;
  for (std::size_t i = 0; i < n; ++i) {
    total.push_back(param[i]);
    const double bound = bn.is_destination(i) ? bn.phi_max[i] : bn.psi_max[i];
    out.theta.constraints.push_back(Posynomial(param[i].scaled(1.0 / bound)));
  }
  out.cost.Ltilde = Posynomial(total);
  out.cost.L0 = 0.0;

  // Destinations no origin can reach still get a phi variable, but their
  // only role is to keep their own (unexcited) state stable.
  std::vector<bool> reached(n, false);
  std::vector<std::size_t> stack(origins.begin(), origins.end());
  for (auto o : origins) reached[o] = true;
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    for (const auto& e : bn.graph.edges)
      if (e.from == i && !reached[e.to]) reached[e.to] = true, stack.push_back(e.to);
  }
  for (auto d : bn.destinations())
    if (!reached[d]) out.warnings.push_back("destination " + std::to_string(d) + " is not reachable from any origin");
  return out;
}

// ------------------------------------------------------------ SIS epidemics

struct SisNetwork {
  Eigen::MatrixXd adjacency;  // nominal A(i, j) >= 0: rate weight of j infecting i
  double eps = 0.0;           // bound on the norm of the additive uncertainty
  double beta_lo = 0.1, beta_hi = 0.2;
  double delta_lo = 1.0, delta_hi = 2.0;
  double p = 0.1, q = 1.0;    // cost-shape exponents
  double gamma = 0.01;        // required decay rate

  std::size_t nodes() const { return static_cast<std::size_t>(adjacency.rows()); }

  void validate() const {
    if (adjacency.rows() == 0 || adjacency.rows() != adjacency.cols())
      throw std::invalid_argument("SIS adjacency must be square and nonempty");
    if (!(adjacency.array() >= 0.0).all()) throw std::invalid_argument("SIS adjacency must be nonnegative");
    if (!(eps >= 0.0 && std::isfinite(eps))) throw std::invalid_argument("eps must be nonnegative");
    if (!(beta_lo > 0.0 && beta_lo < beta_hi && std::isfinite(beta_hi)))
      throw std::invalid_argument("need 0 < beta_lo < beta_hi");
    if (!(delta_lo > 0.0 && delta_lo < delta_hi && std::isfinite(delta_hi)))
      throw std::invalid_argument("need 0 < delta_lo < delta_hi");
    if (!(p > 0.0 && q > 0.0)) throw std::invalid_argument("cost exponents must be positive");
    if (!(gamma > 0.0)) throw std::invalid_argument("required decay rate must be positive");
  }

  /// Normalized costs: infection_cost(beta_lo) = 1, infection_cost(beta_hi) = 0,
  /// recovery_cost(delta_lo) = 0, recovery_cost(delta_hi) = 1.
  double infection_cost(double beta) const {
    return (std::pow(beta, -p) - std::pow(beta_hi, -p)) / (std::pow(beta_lo, -p) - std::pow(beta_hi, -p));
  }
  double recovery_cost(double delta) const {
    return (std::pow(delta, q) - std::pow(delta_lo, q)) / (std::pow(delta_hi, q) - std::pow(delta_lo, q));
  }
  /// Lower end of the box for the reparametrized recovery variable.
  double dc_lo() const { return 1.0 / (delta_hi - delta_lo + 1.0); }
  double delta_from_dc(double dc) const { return delta_hi + 1.0 - 1.0 / dc; }
  double dc_from_delta(double delta) const { return 1.0 / (delta_hi + 1.0 - delta); }
};

struct SisProblem {
  ParamSystem ps;
  CostSpec cost;
  ThetaSet theta;
  UncertaintyStructure uncertainty;
  bool reparametrized = false;
};

inline std::string sis_beta(std::size_t i) { return "beta" + std::to_string(i); }
inline std::string sis_delta(std::size_t i) { return "delta" + std::to_string(i); }
inline std::string sis_dc(std::size_t i) { return "dc" + std::to_string(i); }

/// Variables beta_i, delta_i (or dc_i when reparametrized). In the
/// reparametrized form delta_i = delta_hi + 1 - 1/dc_i, R = (delta_hi + 1) I
/// and the recovery cost becomes (dc^q - dc_lo^q) / (1 - dc_lo^q), which has the
/// same endpoints and is increasing in delta.
inline SisProblem build_sis_problem(const SisNetwork& sn, bool reparametrize = false) {
  sn.validate();
  const std::size_t n = sn.nodes();
  SisProblem out;
  out.reparametrized = reparametrize;
  ParamSystem& ps = out.ps;

  std::vector<Monomial> beta, rec;
  for (std::size_t i = 0; i < n; ++i) {
    beta.push_back(Monomial::variable(sis_beta(i)));
    ps.vars.add(sis_beta(i));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::string name = reparametrize ? sis_dc(i) : sis_delta(i);
    rec.push_back(Monomial::variable(name));
    ps.vars.add(name);
  }

  ps.Atilde = PosyMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double a = sn.adjacency(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (a > 0.0) ps.Atilde.set(i, j, Posynomial(beta[i].scaled(a)));
    }
  if (reparametrize) {
    for (std::size_t i = 0; i < n; ++i) ps.Atilde.accumulate(i, i, Posynomial(rec[i].reciprocal()));
    ps.r0 = R0Factorization{Monomial::constant(sn.delta_hi + 1.0), Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n))};
    ps.R = ParamSystem::diag_from_factor(*ps.r0);
  } else {
    ps.R = DiagMonoMatrix(rec);
  }
  ps.B = PosyMatrix(n, n);
  ps.C = PosyMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) ps.B.set(i, i, Posynomial(beta[i]));
  ps.validate();

  const double bden = std::pow(sn.beta_lo, -sn.p) - std::pow(sn.beta_hi, -sn.p);
  std::vector<Monomial> terms;
  double shift = 0.0;
  for (std::size_t i = 0; i < n; ++i) terms.push_back(beta[i].pow(-sn.p).scaled(1.0 / bden));
  shift += std::pow(sn.beta_hi, -sn.p) / bden;
  if (reparametrize) {
    const double lo = std::pow(sn.dc_lo(), sn.q), dden = 1.0 - lo;
    for (std::size_t i = 0; i < n; ++i) terms.push_back(rec[i].pow(sn.q).scaled(1.0 / dden));
    shift += lo / dden;
  } else {
    const double lo = std::pow(sn.delta_lo, sn.q), dden = std::pow(sn.delta_hi, sn.q) - lo;
    for (std::size_t i = 0; i < n; ++i) terms.push_back(rec[i].pow(sn.q).scaled(1.0 / dden));
    shift += lo / dden;
  }
  out.cost.Ltilde = Posynomial(terms);
  out.cost.L0 = static_cast<double>(n) * shift;

  auto& th = out.theta.constraints;
  for (std::size_t i = 0; i < n; ++i) {
    th.push_back(Posynomial(beta[i].scaled(1.0 / sn.beta_hi)));
    th.push_back(Posynomial(beta[i].reciprocal().scaled(sn.beta_lo)));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (reparametrize) {
      th.push_back(Posynomial(rec[i]));
      th.push_back(Posynomial(rec[i].reciprocal().scaled(sn.dc_lo())));
    } else {
      th.push_back(Posynomial(rec[i].scaled(1.0 / sn.delta_hi)));
      th.push_back(Posynomial(rec[i].reciprocal().scaled(sn.delta_lo)));
    }
  }
  out.uncertainty = UncertaintyStructure{BlockPattern{{n}, 0}, sn.eps};
  return out;
}

/// Recover (beta, delta) from a solution point of either parametrization.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> sis_rates(const SisNetwork& sn, const Point& theta) {
  const auto n = static_cast<Eigen::Index>(sn.nodes());
  Eigen::VectorXd beta(n), delta(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    beta(i) = lookup(theta, sis_beta(k));
    auto it = theta.find(sis_delta(k));
    delta(i) = it != theta.end() ? it->second : sn.delta_from_dc(lookup(theta, sis_dc(k)));
  }
  return {beta, delta};
}

/// diag(beta) A - diag(delta): the nominal linear upper-bounding model.
inline Eigen::MatrixXd sis_generator(const SisNetwork& sn, const Point& theta) {
  const auto [beta, delta] = sis_rates(sn, theta);
  Eigen::MatrixXd f = beta.asDiagonal() * sn.adjacency;
  f.diagonal() -= delta;
  return f;
}

struct NodeInvestment {
  std::size_t node = 0;
  double infection = 0.0;  // normalized cost spent on lowering beta_i
  double recovery = 0.0;   // normalized cost spent on raising delta_i
  double centrality = 0.0;
};

inline std::vector<NodeInvestment> sis_investments(const SisNetwork& sn, const Point& theta) {
  const auto [beta, delta] = sis_rates(sn, theta);
  const Eigen::VectorXd rank = pagerank(sn.adjacency);
  std::vector<NodeInvestment> out;
  for (Eigen::Index i = 0; i < beta.size(); ++i)
    out.push_back({static_cast<std::size_t>(i), sn.infection_cost(beta(i)), sn.recovery_cost(delta(i)), rank(i)});
  return out;
}

}  // namespace posgp
