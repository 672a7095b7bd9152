#pragma once

// JSON rendering of solve results, oracle reports and problem echoes.
// Schema (version 1) is documented in the README.

#include <cmath>
#include <string>

#include "json.hpp"
#include "posgp/gp.hpp"
#include "posgp/system.hpp"

namespace posgp::report {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Finite numbers as numbers, everything else as null.
inline json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json point(const Point& p) {
  json j = json::object();
  for (const auto& [k, v] : p) j[k] = number(v);
  return j;
}

inline json status_name(SolveStatus s) { return to_string(s); }

inline json constraints(const SolveResult& r) {
  json a = json::array();
  for (std::size_t i = 0; i < r.constraint_values.size(); ++i) {
    const double v = r.constraint_values[i];
    a.push_back({{"label", i < r.constraint_labels.size() ? r.constraint_labels[i] : std::string()},
                 {"value", number(v)},
                 {"slack", number(1.0 - v)}});
  }
  return a;
}

inline json diagnostics(const SolveResult& r) {
  json d = {{"iterations", r.iterations},
            {"kkt_residual", number(r.kkt_residual)},
            {"stationarity", number(r.stationarity)},
            {"phase1_value", number(r.phase1_value)},
            {"message", r.message}};
  json h = json::array();
  for (double v : r.objective_history) h.push_back(number(v));
  d["objective_history"] = std::move(h);
  return d;
}

inline json norms(const NormReport& n) {
  json j = {{"stable", n.stable}, {"spectral_abscissa", number(n.spectral_abscissa)}};
  auto opt = [&](const char* key, const std::optional<double>& v) {
    if (v) j[key] = number(*v);
  };
  opt("h2", n.h2);
  opt("hinf", n.hinf);
  if (!n.hankel_sv.empty()) {
    json sv = json::array();
    for (double v : n.hankel_sv) sv.push_back(number(v));
    j["hankel_sv"] = std::move(sv);
  }
  if (!n.schatten.empty()) {
    json s = json::object();
    for (const auto& [p, v] : n.schatten) s[std::to_string(p)] = number(v);
    j["schatten"] = std::move(s);
  }
  opt("l1_gain", n.l1_gain);
  opt("linf_gain", n.linf_gain);
  opt("decay_rate_lb", n.decay_rate_lb);
  return j;
}

/// One certified inequality: value < bound (or value > bound when `above`).
inline json check(const std::string& what, double value, double bound, bool above = false) {
  const bool holds = above ? value > bound : value < bound;
  return {{"quantity", what}, {"value", number(value)}, {"bound", number(bound)}, {"holds", holds}};
}

inline json matrix(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(number(m(i, j)));
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace posgp::report
