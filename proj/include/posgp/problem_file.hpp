#pragma once

// Text format for parametrized positive systems and synthesis settings.
//
//   # comment
//   vars th a
//   Atilde 2 2          # header "<name> rows cols", then one line per row
//     0, a
//     1, 0
//   R th, 2*th          # diagonal monomials; or "r <monomial>" plus "R0 c1, c2"
//   B 2 1
//     1
//     0
//   C 1 2
//     1, 1
//   cost th + 1/a
//   L0 0
//   theta th/50         # one constraint (<= 1) per line
//   gamma 0.5
//
// Entries are posynomials built from positive numbers, declared variables,
// '*', '/', '+', '^' (numeric exponent) and parentheses. A matrix entry that is
// exactly "0" is a structural zero. There is no minus sign in the grammar.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "posgp/apps.hpp"
#include "posgp/posynomial.hpp"
#include "posgp/synth.hpp"
#include "posgp/system.hpp"

namespace posgp {

struct ParseError : std::runtime_error {
  std::string message;
  std::size_t line = 0;    // 1-based; 0 when the error has no single location
  std::size_t column = 0;  // 1-based
  std::string file;

  ParseError(std::string msg, std::size_t line_ = 0, std::size_t column_ = 0, std::string file_ = {})
      : std::runtime_error(render(msg, line_, column_, file_)),
        message(std::move(msg)),
        line(line_),
        column(column_),
        file(std::move(file_)) {}

  ParseError in_file(const std::string& path) const { return ParseError(message, line, column, path); }

 private:
  static std::string render(const std::string& msg, std::size_t line, std::size_t column, const std::string& file) {
    std::string where = file;
    if (line) where += (where.empty() ? "" : ":") + std::to_string(line) + ":" + std::to_string(column);
    return where.empty() ? msg : where + ": " + msg;
  }
};

// ------------------------------------------------------------ expressions

namespace detail {

inline bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(out);
}

class ExprParser {
 public:
  ExprParser(std::string_view text, const std::set<std::string>& known, std::size_t line, std::size_t col0)
      : s_(text), known_(known), line_(line), col0_(col0) {}

  Posynomial parse() {
    Posynomial p = sum();
    skip_ws();
    if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col0_ + pos_); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) return ++pos_, true;
    return false;
  }
  void reject_minus() {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == '-') fail("negative coefficient: '-' is not allowed in a posynomial");
  }

  Posynomial sum() {
    Posynomial p = product();
    for (;;) {
      reject_minus();
      if (!eat('+')) return p;
      p += product();
    }
  }

  Posynomial product() {
    Posynomial p = power();
    for (;;) {
      if (eat('*')) {
        p = p * power();
      } else if (eat('/')) {
        const std::size_t at = pos_;
        const Posynomial d = power();
        if (!d.is_monomial()) {
          pos_ = at;
          fail("division by a sum is not a posynomial");
        }
        p = p / d.as_monomial();
      } else {
        return p;
      }
    }
  }

  Posynomial power() {
    const std::size_t at = pos_;
    Posynomial base = primary();
    if (!eat('^')) return base;
    reject_minus();
    skip_ws();
    const double e = number();
    try {
      return base.pow(e);
    } catch (const std::invalid_argument& ex) {
      pos_ = at;
      fail(ex.what());
    }
  }

  double number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t q = pos_ + 1;
      if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) ++q;
      if (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) {
        pos_ = q;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    double v = 0.0;
    if (!parse_double(s_.substr(start, pos_ - start), v)) {
      pos_ = start;
      fail("expected a number");
    }
    return v;
  }

  Posynomial primary() {
    reject_minus();
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Posynomial p = sum();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::size_t at = pos_;
      const double v = number();
      if (!(v > 0.0)) {
        pos_ = at;
        fail("zero is only allowed as a whole matrix entry");
      }
      return Posynomial(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      if (!known_.count(name)) {
        pos_ = start;
        fail("unknown variable '" + name + "'");
      }
      return Posynomial(Monomial::variable(name));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  const std::set<std::string>& known_;
  std::size_t line_, col0_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parse one posynomial expression over the given variable names.
inline Posynomial parse_posynomial(std::string_view text, const std::set<std::string>& vars, std::size_t line = 1,
                                   std::size_t column = 1) {
  return detail::ExprParser(text, vars, line, column).parse();
}

// ----------------------------------------------------------------- bundle

struct ProblemBundle {
  ParamSystem ps;
  CostSpec cost;
  ThetaSet theta;
  std::optional<double> gamma;
  std::optional<int> schatten_p;
  std::optional<double> budget;
  std::optional<TradeoffFn> tradeoff;
  std::optional<BlockPattern> blocks;
  std::optional<double> eps;
  std::optional<double> strict_margin;
  std::optional<int> series_order;
  std::optional<double> rho_cap;

  bool operator==(const ProblemBundle& o) const {
    return ps.vars.names() == o.ps.vars.names() && ps.Atilde == o.ps.Atilde && ps.R == o.ps.R && ps.B == o.ps.B &&
           ps.C == o.ps.C && ps.delay == o.ps.delay && ps.r0 == o.ps.r0 && cost == o.cost && theta == o.theta &&
           gamma == o.gamma && schatten_p == o.schatten_p && budget == o.budget && tradeoff == o.tradeoff &&
           blocks == o.blocks && eps == o.eps && strict_margin == o.strict_margin && series_order == o.series_order &&
           rho_cap == o.rho_cap;
  }
};

namespace detail {

struct SourceLine {
  std::size_t number;
  std::string text;  // comment stripped
};

inline std::vector<SourceLine> significant_lines(std::istream& in) {
  std::vector<SourceLine> out;
  std::string raw;
  for (std::size_t n = 1; std::getline(in, raw); ++n) {
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back({n, raw});
  }
  return out;
}

/// A piece of a line together with its 1-based starting column.
struct Piece {
  std::string_view text;
  std::size_t column;
};

inline Piece trim(std::string_view s, std::size_t column) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return {s.substr(a, b - a), column + a};
}

inline std::vector<Piece> split(std::string_view s, std::size_t column, char sep) {
  std::vector<Piece> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i)
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start), column + start));
      start = i + 1;
    }
  return out;
}

inline std::vector<Piece> words(std::string_view s, std::size_t column) {
  std::vector<Piece> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back({s.substr(start, i - start), column + start});
  }
  return out;
}

struct Directive {
  std::string keyword;
  Piece args;
  std::size_t line;
  std::vector<SourceLine> rows;  // matrix blocks only
};

inline double number_arg(const Directive& d) {
  double v = 0.0;
  if (!parse_double(d.args.text, v)) throw ParseError("expected a number after '" + d.keyword + "'", d.line, d.args.column);
  return v;
}

inline std::size_t count_arg(const Piece& p, std::size_t line) {
  std::size_t v = 0;
  const auto res = std::from_chars(p.text.data(), p.text.data() + p.text.size(), v);
  if (res.ec != std::errc() || res.ptr != p.text.data() + p.text.size())
    throw ParseError("expected a nonnegative integer", line, p.column);
  return v;
}

inline bool is_matrix_keyword(const std::string& k) {
  return k == "Atilde" || k == "B" || k == "C" || k == "Ad" || k == "Cd";
}

inline PosyMatrix parse_matrix(const Directive& d, const std::set<std::string>& vars) {
  const auto dims = words(d.args.text, d.args.column);
  if (dims.size() != 2) throw ParseError("matrix header needs '<rows> <cols>'", d.line, d.args.column);
  const std::size_t rows = count_arg(dims[0], d.line), cols = count_arg(dims[1], d.line);
  if (d.rows.size() != rows)
    throw ParseError(d.keyword + " declares " + std::to_string(rows) + " rows but " + std::to_string(d.rows.size()) +
                         " follow",
                     d.line, 1);
  PosyMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto cells = split(d.rows[i].text, 1, ',');
    if (cells.size() != cols)
      throw ParseError(d.keyword + " row " + std::to_string(i + 1) + " has " + std::to_string(cells.size()) +
                           " entries, expected " + std::to_string(cols),
                       d.rows[i].number, 1);
    for (std::size_t j = 0; j < cols; ++j) {
      double v = 1.0;
      if (parse_double(cells[j].text, v) && v == 0.0) continue;
      m.set(i, j, parse_posynomial(cells[j].text, vars, d.rows[i].number, cells[j].column));
    }
  }
  return m;
}

inline Monomial parse_monomial(const Piece& p, const std::set<std::string>& vars, std::size_t line) {
  const Posynomial q = parse_posynomial(p.text, vars, line, p.column);
  if (!q.is_monomial()) throw ParseError("expected a monomial", line, p.column);
  return q.as_monomial();
}

}  // namespace detail

inline ProblemBundle parse_problem(std::istream& in) {
  using namespace detail;
  static const std::set<std::string> keywords = {
      "vars", "Atilde", "R", "r", "R0", "B", "C", "Ad", "Cd", "h", "cost", "L0", "theta", "gamma", "schatten_p",
      "budget", "tradeoff", "tradeoff_args", "full_blocks", "scalar_blocks", "eps", "strict_margin",
      "series_order", "rho_cap"};
  auto indented = [](const SourceLine& l) { return l.text[0] == ' ' || l.text[0] == '\t'; };

  const auto lines = significant_lines(in);
  std::vector<Directive> ds;
  for (std::size_t k = 0; k < lines.size();) {
    const auto ws = words(lines[k].text, 1);
    if (indented(lines[k])) throw ParseError("indented line outside a matrix block", lines[k].number, ws.front().column);
    const std::string key(ws.front().text);
    if (!keywords.count(key)) throw ParseError("unknown directive '" + key + "'", lines[k].number, ws.front().column);
    const std::size_t after = ws.front().column - 1 + key.size();
    Directive d{key, trim(std::string_view(lines[k].text).substr(after), after + 1), lines[k].number, {}};
    ++k;
    // matrix rows are the indented lines that follow; parse_matrix checks the count
    if (is_matrix_keyword(key))
      while (k < lines.size() && indented(lines[k])) d.rows.push_back(lines[k++]);
    ds.push_back(std::move(d));
  }

  std::set<std::string> seen;
  for (const auto& d : ds)
    if (d.keyword != "theta" && !seen.insert(d.keyword).second)
      throw ParseError("duplicate directive '" + d.keyword + "'", d.line, 1);

  ProblemBundle b;
  std::set<std::string> vars;
  for (const auto& d : ds)
    if (d.keyword == "vars")
      for (const auto& w : words(d.args.text, d.args.column)) {
        const std::string name(w.text);
        const bool ident = (std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_') &&
                           std::all_of(name.begin(), name.end(), [](char c) {
                             return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
                           });
        if (!ident) throw ParseError("invalid variable name '" + name + "'", d.line, w.column);
        if (!vars.insert(name).second) throw ParseError("variable '" + name + "' declared twice", d.line, w.column);
        b.ps.vars.add(name);
      }

  std::optional<Piece> tradeoff_text;
  std::size_t tradeoff_line = 0;
  std::optional<std::vector<std::string>> tradeoff_args;
  std::optional<Monomial> r;
  std::optional<Eigen::VectorXd> r0;
  std::optional<std::vector<Monomial>> rdiag;
  std::optional<PosyMatrix> ad, cd;
  std::optional<double> h;
  bool have_atilde = false, have_b = false, have_c = false, have_cost = false;
  std::optional<std::vector<std::size_t>> full;
  std::optional<std::size_t> scalars;

  for (const auto& d : ds) {
    const std::string& k = d.keyword;
    if (k == "vars") continue;
    if (k == "Atilde") b.ps.Atilde = parse_matrix(d, vars), have_atilde = true;
    else if (k == "B") b.ps.B = parse_matrix(d, vars), have_b = true;
    else if (k == "C") b.ps.C = parse_matrix(d, vars), have_c = true;
    else if (k == "Ad") ad = parse_matrix(d, vars);
    else if (k == "Cd") cd = parse_matrix(d, vars);
    else if (k == "R") {
      rdiag.emplace();
      for (const auto& p : split(d.args.text, d.args.column, ',')) rdiag->push_back(parse_monomial(p, vars, d.line));
    } else if (k == "r") {
      r = parse_monomial(d.args, vars, d.line);
    } else if (k == "R0") {
      const auto ps = split(d.args.text, d.args.column, ',');
      r0 = Eigen::VectorXd(static_cast<Eigen::Index>(ps.size()));
      for (std::size_t i = 0; i < ps.size(); ++i) {
        double v = 0.0;
        if (!parse_double(ps[i].text, v) || !(v > 0.0))
          throw ParseError("R0 entries must be positive numbers", d.line, ps[i].column);
        (*r0)(static_cast<Eigen::Index>(i)) = v;
      }
    } else if (k == "h") {
      h = number_arg(d);
    } else if (k == "cost") {
      b.cost.Ltilde = parse_posynomial(d.args.text, vars, d.line, d.args.column);
      have_cost = true;
    } else if (k == "L0") {
      b.cost.L0 = number_arg(d);
    } else if (k == "theta") {
      b.theta.constraints.push_back(parse_posynomial(d.args.text, vars, d.line, d.args.column));
    } else if (k == "gamma") {
      b.gamma = number_arg(d);
    } else if (k == "budget") {
      b.budget = number_arg(d);
    } else if (k == "eps") {
      b.eps = number_arg(d);
    } else if (k == "strict_margin") {
      b.strict_margin = number_arg(d);
    } else if (k == "rho_cap") {
      b.rho_cap = number_arg(d);
    } else if (k == "schatten_p") {
      b.schatten_p = static_cast<int>(count_arg(d.args, d.line));
    } else if (k == "series_order") {
      b.series_order = static_cast<int>(count_arg(d.args, d.line));
    } else if (k == "scalar_blocks") {
      scalars = count_arg(d.args, d.line);
    } else if (k == "full_blocks") {
      full.emplace();
      for (const auto& p : split(d.args.text, d.args.column, ',')) full->push_back(count_arg(p, d.line));
    } else if (k == "tradeoff") {
      tradeoff_text = d.args;
      tradeoff_line = d.line;
    } else if (k == "tradeoff_args") {
      tradeoff_args.emplace();
      for (const auto& w : split(d.args.text, d.args.column, ',')) tradeoff_args->emplace_back(w.text);
    }
  }

  if (!have_atilde || !have_b || !have_c) throw ParseError("Atilde, B and C are required");
  if (!have_cost) throw ParseError("cost is required");
  if (rdiag && (r || r0)) throw ParseError("give either R or r/R0, not both");
  if (rdiag) {
    b.ps.R = DiagMonoMatrix(*rdiag);
  } else {
    if (!r || !r0) throw ParseError("R (or r together with R0) is required");
    b.ps.r0 = R0Factorization{*r, *r0};
    b.ps.R = ParamSystem::diag_from_factor(*b.ps.r0);
  }
  if (ad || cd || h) {
    if (!ad || !h) throw ParseError("a delay needs Ad and h (Cd is optional)");
    b.ps.delay = ParamDelay{*ad, cd ? *cd : PosyMatrix(b.ps.ny(), b.ps.nx()), *h};
  }
  if (tradeoff_text || tradeoff_args) {
    if (!tradeoff_text || !tradeoff_args) throw ParseError("tradeoff and tradeoff_args go together");
    const std::set<std::string> args(tradeoff_args->begin(), tradeoff_args->end());
    b.tradeoff = TradeoffFn{parse_posynomial(tradeoff_text->text, args, tradeoff_line, tradeoff_text->column),
                            *tradeoff_args};
  }
  if (full || scalars) b.blocks = BlockPattern{full.value_or(std::vector<std::size_t>{}), scalars.value_or(0)};

  try {
    b.ps.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("inconsistent problem: ") + e.what());
  }
  return b;
}

inline ProblemBundle parse_problem_text(const std::string& text) {
  std::istringstream in(text);
  return parse_problem(in);
}

inline ProblemBundle parse_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return parse_problem(in);
  } catch (const ParseError& e) {
    throw e.in_file(path);
  }
}

// ------------------------------------------------------------- serializer

namespace detail {

inline void write_matrix(std::ostream& out, const std::string& name, const PosyMatrix& m) {
  out << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out << "  ";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ", ";
      const Posynomial* p = m.at(i, j);
      out << (p ? p->to_string() : "0");
    }
    out << '\n';
  }
}

template <class Seq, class F>
std::string joined(const Seq& seq, F render) {
  std::string s;
  for (const auto& x : seq) s += (s.empty() ? "" : ", ") + render(x);
  return s;
}

}  // namespace detail

/// Canonical text; parse_problem_text(serialize_problem(b)) == b.
inline std::string serialize_problem(const ProblemBundle& b) {
  std::ostringstream out;
  const ParamSystem& ps = b.ps;
  out << "vars";
  for (const auto& n : ps.vars.names()) out << ' ' << n;
  out << '\n';
  detail::write_matrix(out, "Atilde", ps.Atilde);
  if (ps.r0) {
    out << "r " << ps.r0->r.to_string() << '\n';
    std::vector<double> r0(ps.r0->R0.data(), ps.r0->R0.data() + ps.r0->R0.size());
    out << "R0 " << detail::joined(r0, [](double v) { return format_number(v); }) << '\n';
  } else {
    out << "R " << detail::joined(ps.R.diagonal(), [](const Monomial& m) { return m.to_string(); }) << '\n';
  }
  detail::write_matrix(out, "B", ps.B);
  detail::write_matrix(out, "C", ps.C);
  if (ps.delay) {
    detail::write_matrix(out, "Ad", ps.delay->Ad);
    detail::write_matrix(out, "Cd", ps.delay->Cd);
    out << "h " << format_number(ps.delay->h) << '\n';
  }
  out << "cost " << b.cost.Ltilde.to_string() << '\n';
  out << "L0 " << format_number(b.cost.L0) << '\n';
  for (const auto& c : b.theta.constraints) out << "theta " << c.to_string() << '\n';
  auto opt = [&](const char* key, const auto& v) {
    if (v) out << key << ' ' << format_number(static_cast<double>(*v)) << '\n';
  };
  opt("gamma", b.gamma);
  opt("schatten_p", b.schatten_p);
  opt("budget", b.budget);
  if (b.tradeoff) {
    out << "tradeoff " << b.tradeoff->expr.to_string() << '\n';
    out << "tradeoff_args " << detail::joined(b.tradeoff->args, [](const std::string& s) { return s; }) << '\n';
  }
  if (b.blocks) {
    if (!b.blocks->full_blocks.empty())
      out << "full_blocks "
          << detail::joined(b.blocks->full_blocks, [](std::size_t v) { return std::to_string(v); }) << '\n';
    out << "scalar_blocks " << b.blocks->scalar_blocks << '\n';
  }
  opt("eps", b.eps);
  opt("strict_margin", b.strict_margin);
  opt("series_order", b.series_order);
  opt("rho_cap", b.rho_cap);
  return out.str();
}

// ---------------------------------------------------- theta and edge lists

/// Lines "name value" or "name = value"; '#' starts a comment.
inline Point parse_theta(std::istream& in) {
  Point p;
  for (const auto& l : detail::significant_lines(in)) {
    std::string text = l.text;
    std::replace(text.begin(), text.end(), '=', ' ');
    const auto ws = detail::words(text, 1);
    double v = 0.0;
    if (ws.size() != 2 || !detail::parse_double(ws[1].text, v))
      throw ParseError("expected '<name> <value>'", l.number, ws.front().column);
    if (!(v > 0.0)) throw ParseError("parameter values must be positive", l.number, ws[1].column);
    if (!p.emplace(std::string(ws[0].text), v).second)
      throw ParseError("duplicate value for '" + std::string(ws[0].text) + "'", l.number, ws[0].column);
  }
  return p;
}

inline Point parse_theta_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return parse_theta(in);
}

/// Lines "src dst [weight]" with 0-based node ids; an optional "nodes N" line
/// adds isolated nodes beyond the largest id used.
inline Graph parse_edge_list(std::istream& in) {
  Graph g;
  std::size_t declared = 0;
  for (const auto& l : detail::significant_lines(in)) {
    const auto ws = detail::words(l.text, 1);
    if (ws[0].text == "nodes") {
      if (ws.size() != 2) throw ParseError("expected 'nodes <count>'", l.number, ws[0].column);
      declared = detail::count_arg(ws[1], l.number);
      continue;
    }
    if (ws.size() != 2 && ws.size() != 3) throw ParseError("expected '<src> <dst> [weight]'", l.number, ws[0].column);
    Edge e{detail::count_arg(ws[0], l.number), detail::count_arg(ws[1], l.number), std::nullopt};
    if (ws.size() == 3) {
      double w = 0.0;
      if (!detail::parse_double(ws[2].text, w) || !(w > 0.0))
        throw ParseError("edge weight must be a positive number", l.number, ws[2].column);
      e.weight = w;
    }
    g.nodes = std::max({g.nodes, e.from + 1, e.to + 1});
    g.edges.push_back(e);
  }
  g.nodes = std::max(g.nodes, declared);
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid graph: ") + e.what());
  }
  return g;
}

inline Graph parse_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return parse_edge_list(in);
}

}  // namespace posgp
