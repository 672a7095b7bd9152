#pragma once

// Posynomial algebra: monomials, posynomials, sparse posynomial matrices
// (absence means structural zero), and log-domain evaluation.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace posgp {

/// Positive assignment of values to variable names.
using Point = std::map<std::string, double>;
/// Variable name -> real exponent. Zero exponents are never stored.
using Exponents = std::map<std::string, double>;

inline std::string format_number(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

class VarSpace {
 public:
  VarSpace() = default;
  explicit VarSpace(const std::vector<std::string>& names) {
    for (const auto& n : names) add(n);
  }

  std::size_t add(const std::string& name) {
    if (name.empty()) throw std::invalid_argument("empty variable name");
    if (index_.count(name)) throw std::invalid_argument("duplicate variable '" + name + "'");
    index_.emplace(name, names_.size());
    names_.push_back(name);
    return names_.size() - 1;
  }

  std::optional<std::size_t> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  bool contains(const std::string& name) const { return index_.count(name) != 0; }
  std::size_t index(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw std::invalid_argument("unknown variable '" + name + "'");
    return it->second;
  }
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t i) const { return names_.at(i); }

  bool operator==(const VarSpace& o) const { return names_ == o.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline double lookup(const Point& x, const std::string& name) {
  auto it = x.find(name);
  if (it == x.end()) throw std::invalid_argument("no value for variable '" + name + "'");
  if (!(it->second > 0.0) || !std::isfinite(it->second))
    throw std::domain_error("variable '" + name + "' must be positive and finite");
  return it->second;
}

class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(double coeff, Exponents exps = {}) : coeff_(coeff), exps_(std::move(exps)) {
    if (!(coeff_ > 0.0) || !std::isfinite(coeff_))
      throw std::invalid_argument("monomial coefficient must be positive and finite, got " +
                                  format_number(coeff_));
    for (auto it = exps_.begin(); it != exps_.end();) {
      if (!std::isfinite(it->second)) throw std::invalid_argument("non-finite exponent");
      it = (it->second == 0.0) ? exps_.erase(it) : std::next(it);
    }
  }

  static Monomial variable(const std::string& name, double power = 1.0) {
    return Monomial(1.0, Exponents{{name, power}});
  }
  static Monomial constant(double c) { return Monomial(c); }

  double coeff() const { return coeff_; }
  const Exponents& exponents() const { return exps_; }
  double exponent(const std::string& name) const {
    auto it = exps_.find(name);
    return it == exps_.end() ? 0.0 : it->second;
  }
  bool is_constant() const { return exps_.empty(); }

  double eval(const Point& x) const {
    double v = coeff_;
    for (const auto& [n, a] : exps_) v *= std::pow(lookup(x, n), a);
    return v;
  }

  Monomial pow(double a) const {
    Exponents e;
    for (const auto& [n, b] : exps_) e[n] = a * b;
    return Monomial(std::pow(coeff_, a), std::move(e));
  }
  Monomial reciprocal() const { return pow(-1.0); }

  Monomial scaled(double c) const { return Monomial(coeff_ * c, exps_); }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Exponents e = a.exps_;
    for (const auto& [n, x] : b.exps_) e[n] += x;
    return Monomial(a.coeff_ * b.coeff_, std::move(e));
  }
  friend Monomial operator/(const Monomial& a, const Monomial& b) { return a * b.reciprocal(); }

  bool operator==(const Monomial& o) const { return coeff_ == o.coeff_ && exps_ == o.exps_; }

  /// Renders e.g. "2*x^0.5/y". Round-trips through the expression parser.
  std::string to_string() const {
    std::string num, den;
    for (const auto& [n, a] : exps_) {
      std::string& side = a > 0 ? num : den;
      double p = std::abs(a);
      if (!side.empty()) side += "*";
      side += n;
      if (p != 1.0) side += "^" + format_number(p);
    }
    std::string s;
    if (coeff_ != 1.0 || num.empty()) s = format_number(coeff_);
    if (!num.empty()) s += (s.empty() ? "" : "*") + num;
    if (!den.empty()) {
      // a single factor needs no parentheses
      bool single = den.find('*') == std::string::npos;
      s += single ? "/" + den : "/(" + den + ")";
    }
    return s;
  }

 private:
  double coeff_ = 1.0;
  Exponents exps_;
};

/// Sum of one or more monomials with like terms merged. There is no zero
/// posynomial: an absent entry plays that role.
class Posynomial {
 public:
  Posynomial(const Monomial& m) : terms_{m} {}  // NOLINT(google-explicit-constructor)
  explicit Posynomial(double c) : terms_{Monomial(c)} {}
  explicit Posynomial(const std::vector<Monomial>& terms) {
    if (terms.empty()) throw std::invalid_argument("posynomial needs at least one term");
    std::map<Exponents, double> acc;
    for (const auto& t : terms) acc[t.exponents()] += t.coeff();
    terms_.reserve(acc.size());
    for (auto& [e, c] : acc) terms_.emplace_back(c, e);
  }

  const std::vector<Monomial>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_monomial() const { return terms_.size() == 1; }
  const Monomial& as_monomial() const {
    if (!is_monomial()) throw std::invalid_argument("posynomial is not a monomial");
    return terms_.front();
  }

  double eval(const Point& x) const {
    double v = 0.0;
    for (const auto& t : terms_) v += t.eval(x);
    return v;
  }

  std::vector<std::string> variables() const {
    std::vector<std::string> out;
    for (const auto& t : terms_)
      for (const auto& [n, a] : t.exponents()) out.push_back(n);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  friend Posynomial operator+(const Posynomial& a, const Posynomial& b) {
    std::vector<Monomial> t = a.terms_;
    t.insert(t.end(), b.terms_.begin(), b.terms_.end());
    return Posynomial(t);
  }
  friend Posynomial operator*(const Posynomial& a, const Posynomial& b) {
    std::vector<Monomial> t;
    t.reserve(a.size() * b.size());
    for (const auto& x : a.terms_)
      for (const auto& y : b.terms_) t.push_back(x * y);
    return Posynomial(t);
  }
  friend Posynomial operator*(const Posynomial& a, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("posynomial scale must be positive");
    std::vector<Monomial> t;
    for (const auto& x : a.terms_) t.push_back(x.scaled(c));
    return Posynomial(t);
  }
  /// Division is only defined by a monomial.
  friend Posynomial operator/(const Posynomial& a, const Monomial& m) {
    return a * Posynomial(m.reciprocal());
  }
  Posynomial& operator+=(const Posynomial& b) { return *this = *this + b; }

  /// Integer power for general posynomials; any real power for monomials.
  Posynomial pow(double a) const {
    if (is_monomial()) return Posynomial(terms_.front().pow(a));
    if (a < 1.0 || a != std::floor(a))
      throw std::invalid_argument("non-integer or non-positive power of a multi-term posynomial");
    Posynomial r = *this;
    for (int k = 1; k < static_cast<int>(a); ++k) r = r * *this;
    return r;
  }

  /// Fixes the given variables, leaving a posynomial in the remaining ones.
  Posynomial substitute(const Point& fixed) const {
    std::vector<Monomial> t;
    for (const auto& m : terms_) {
      double c = m.coeff();
      Exponents e;
      for (const auto& [n, a] : m.exponents()) {
        auto it = fixed.find(n);
        if (it == fixed.end())
          e[n] = a;
        else
          c *= std::pow(lookup(fixed, n), a);
      }
      t.emplace_back(c, std::move(e));
    }
    return Posynomial(t);
  }

  Posynomial renamed(const std::map<std::string, std::string>& names) const {
    std::vector<Monomial> t;
    for (const auto& m : terms_) {
      Exponents e;
      for (const auto& [n, a] : m.exponents()) {
        auto it = names.find(n);
        e[it == names.end() ? n : it->second] += a;
      }
      t.emplace_back(m.coeff(), std::move(e));
    }
    return Posynomial(t);
  }

  bool operator==(const Posynomial& o) const { return terms_ == o.terms_; }

  std::string to_string() const {
    std::string s;
    for (const auto& t : terms_) s += (s.empty() ? "" : " + ") + t.to_string();
    return s;
  }

 private:
  std::vector<Monomial> terms_;
};

/// Sum where either side may be a structural zero.
inline std::optional<Posynomial> add_opt(const std::optional<Posynomial>& a,
                                         const std::optional<Posynomial>& b) {
  if (!a) return b;
  if (!b) return a;
  return *a + *b;
}

inline Posynomial posy_add(const Posynomial& a, const Posynomial& b) { return a + b; }
inline Posynomial posy_mul(const Posynomial& a, const Posynomial& b) { return a * b; }
inline double eval_monomial(const Monomial& m, const Point& x) { return m.eval(x); }
inline double eval_posynomial(const Posynomial& p, const Point& x) { return p.eval(x); }

class PosyMatrix {
 public:
  using Index = std::pair<std::size_t, std::size_t>;

  PosyMatrix() = default;
  PosyMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

  static PosyMatrix identity(std::size_t n) {
    PosyMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, Posynomial(1.0));
    return m;
  }
  /// Zeros become absent entries; negative entries are rejected.
  static PosyMatrix from_numeric(const Eigen::MatrixXd& a) {
    PosyMatrix m(a.rows(), a.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        if (a(i, j) < 0.0) throw std::invalid_argument("negative entry in nonnegative matrix");
        if (a(i, j) > 0.0) m.set(i, j, Posynomial(a(i, j)));
      }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  const Posynomial* at(std::size_t i, std::size_t j) const {
    check(i, j);
    auto it = entries_.find({i, j});
    return it == entries_.end() ? nullptr : &it->second;
  }
  std::optional<Posynomial> get(std::size_t i, std::size_t j) const {
    const Posynomial* p = at(i, j);
    return p ? std::optional<Posynomial>(*p) : std::nullopt;
  }
  void set(std::size_t i, std::size_t j, const Posynomial& p) {
    check(i, j);
    entries_.insert_or_assign(Index{i, j}, p);
  }
  void set(std::size_t i, std::size_t j, const std::optional<Posynomial>& p) {
    if (p)
      set(i, j, *p);
    else
      clear(i, j);
  }
  void clear(std::size_t i, std::size_t j) {
    check(i, j);
    entries_.erase({i, j});
  }
  void accumulate(std::size_t i, std::size_t j, const Posynomial& p) {
    check(i, j);
    auto it = entries_.find({i, j});
    if (it == entries_.end())
      entries_.emplace(Index{i, j}, p);
    else
      it->second = it->second + p;
  }

  const std::map<Index, Posynomial>& entries() const { return entries_; }
  std::size_t nonzeros() const { return entries_.size(); }
  bool row_empty(std::size_t i) const {
    auto it = entries_.lower_bound({i, 0});
    return it == entries_.end() || it->first.first != i;
  }

  PosyMatrix transpose() const {
    PosyMatrix t(cols_, rows_);
    for (const auto& [ij, p] : entries_) t.set(ij.second, ij.first, p);
    return t;
  }

  Eigen::MatrixXd eval(const Point& x) const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows_, cols_);
    for (const auto& [ij, p] : entries_) m(ij.first, ij.second) = p.eval(x);
    return m;
  }

  std::vector<std::string> variables() const {
    std::vector<std::string> out;
    for (const auto& [ij, p] : entries_) {
      auto v = p.variables();
      out.insert(out.end(), v.begin(), v.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  friend PosyMatrix operator+(const PosyMatrix& a, const PosyMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix sum: shape mismatch");
    PosyMatrix s = a;
    for (const auto& [ij, p] : b.entries_) s.accumulate(ij.first, ij.second, p);
    return s;
  }
  friend PosyMatrix operator*(const PosyMatrix& a, const PosyMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product: shape mismatch");
    // group b by row for a sparse product
    std::vector<std::vector<std::pair<std::size_t, const Posynomial*>>> brows(b.rows_);
    for (const auto& [ij, p] : b.entries_) brows[ij.first].emplace_back(ij.second, &p);
    PosyMatrix c(a.rows_, b.cols_);
    for (const auto& [ij, p] : a.entries_)
      for (const auto& [k, q] : brows[ij.second]) c.accumulate(ij.first, k, p * *q);
    return c;
  }

  bool operator==(const PosyMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
  }

 private:
  void check(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_) throw std::out_of_range("posynomial matrix index out of range");
  }
  std::size_t rows_ = 0, cols_ = 0;
  std::map<Index, Posynomial> entries_;
};

/// Diagonal matrix whose entries are all monomials (never absent).
class DiagMonoMatrix {
 public:
  DiagMonoMatrix() = default;
  explicit DiagMonoMatrix(std::vector<Monomial> diag) : diag_(std::move(diag)) {}
  std::size_t size() const { return diag_.size(); }
  const Monomial& operator[](std::size_t i) const { return diag_.at(i); }
  const std::vector<Monomial>& diagonal() const { return diag_; }
  Eigen::VectorXd eval(const Point& x) const {
    Eigen::VectorXd d(diag_.size());
    for (std::size_t i = 0; i < diag_.size(); ++i) d(i) = diag_[i].eval(x);
    return d;
  }
  PosyMatrix as_matrix() const {
    PosyMatrix m(size(), size());
    for (std::size_t i = 0; i < size(); ++i) m.set(i, i, Posynomial(diag_[i]));
    return m;
  }
  bool operator==(const DiagMonoMatrix& o) const { return diag_ == o.diag_; }

 private:
  std::vector<Monomial> diag_;
};

inline PosyMatrix kron(const PosyMatrix& a, const PosyMatrix& b) {
  PosyMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (const auto& [ij, p] : a.entries())
    for (const auto& [kl, q] : b.entries())
      k.set(ij.first * b.rows() + kl.first, ij.second * b.cols() + kl.second, p * q);
  return k;
}

/// a (+) b = a (x) I + I (x) b, for square a and b.
inline PosyMatrix kron_sum_symbolic(const PosyMatrix& a, const PosyMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols())
    throw std::invalid_argument("Kronecker sum needs square matrices");
  return kron(a, PosyMatrix::identity(b.rows())) + kron(PosyMatrix::identity(a.rows()), b);
}

/// a (+) O_m (+) b, i.e. the sum with a zero matrix of order m in the middle.
inline PosyMatrix kron_sum_padded(const PosyMatrix& a, std::size_t m, const PosyMatrix& b) {
  return kron_sum_symbolic(a, kron(PosyMatrix::identity(m), b));
}

/// Returns (sum_j B_j (x) B_j, sum_i C_i (x) C_i): a column of length n^2 and a
/// row of length n^2, where B_j are the columns of B and C_i the rows of C.
inline std::pair<PosyMatrix, PosyMatrix> build_h2_vectors(const PosyMatrix& b, const PosyMatrix& c) {
  const std::size_t n = b.rows();
  if (c.cols() != n) throw std::invalid_argument("build_h2_vectors: B and C disagree on the state dimension");
  PosyMatrix bt(n * n, 1), ct(1, n * n);
  for (std::size_t j = 0; j < b.cols(); ++j)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t d = 0; d < n; ++d) {
        const Posynomial *p = b.at(a, j), *q = b.at(d, j);
        if (p && q) bt.accumulate(a * n + d, 0, *p * *q);
      }
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t d = 0; d < n; ++d) {
        const Posynomial *p = c.at(i, a), *q = c.at(i, d);
        if (p && q) ct.accumulate(0, a * n + d, *p * *q);
      }
  return {bt, ct};
}

/// A posynomial compiled against a VarSpace for repeated log-domain evaluation:
/// F(z) = log sum_k exp(log c_k + a_k^T z).
class LogPosynomial {
 public:
  LogPosynomial() = default;
  LogPosynomial(const Posynomial& p, const VarSpace& vars) {
    std::map<std::size_t, int> local;
    for (const auto& t : p.terms())
      for (const auto& [n, a] : t.exponents()) local.emplace(vars.index(n), 0);
    for (auto& [g, l] : local) {
      l = static_cast<int>(support_.size());
      support_.push_back(g);
    }
    for (const auto& t : p.terms()) {
      log_coeffs_.push_back(std::log(t.coeff()));
      std::vector<std::pair<int, double>> e;
      for (const auto& [n, a] : t.exponents()) e.emplace_back(local.at(vars.index(n)), a);
      exps_.push_back(std::move(e));
    }
  }

  /// Global variable indices this function depends on.
  const std::vector<std::size_t>& support() const { return support_; }
  std::size_t terms() const { return log_coeffs_.size(); }

  double value(const Eigen::VectorXd& z) const {
    thread_local std::vector<double> y;
    y.resize(terms());
    double ymax = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < terms(); ++k) {
      double s = log_coeffs_[k];
      for (const auto& [l, a] : exps_[k]) s += a * z(support_[l]);
      y[k] = s;
      ymax = std::max(ymax, s);
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < terms(); ++k) acc += std::exp(y[k] - ymax);
    return ymax + std::log(acc);
  }

  /// Value, gradient and Hessian restricted to support().
  double evaluate(const Eigen::VectorXd& z, Eigen::VectorXd& grad, Eigen::MatrixXd* hess) const {
    const std::size_t m = support_.size();
    thread_local std::vector<double> y;
    y.resize(terms());
    double ymax = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < terms(); ++k) {
      double s = log_coeffs_[k];
      for (const auto& [l, a] : exps_[k]) s += a * z(support_[l]);
      y[k] = s;
      ymax = std::max(ymax, s);
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < terms(); ++k) {
      y[k] = std::exp(y[k] - ymax);
      acc += y[k];
    }
    grad = Eigen::VectorXd::Zero(m);
    if (hess) *hess = Eigen::MatrixXd::Zero(m, m);
    for (std::size_t k = 0; k < terms(); ++k) {
      const double w = y[k] / acc;
      for (const auto& [l, a] : exps_[k]) {
        grad(l) += w * a;
        if (hess)
          for (const auto& [l2, a2] : exps_[k]) (*hess)(l, l2) += w * a * a2;
      }
    }
    if (hess) *hess -= grad * grad.transpose();
    return ymax + std::log(acc);
  }

 private:
  std::vector<std::size_t> support_;
  std::vector<double> log_coeffs_;
  std::vector<std::vector<std::pair<int, double>>> exps_;
};

struct LogEval {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

/// log f(e^z) with dense gradient and Hessian over the whole VarSpace.
inline LogEval log_domain_eval(const Posynomial& f, const VarSpace& vars, const Eigen::VectorXd& z) {
  if (static_cast<std::size_t>(z.size()) != vars.size())
    throw std::invalid_argument("log_domain_eval: point dimension mismatch");
  LogPosynomial lp(f, vars);
  Eigen::VectorXd g;
  Eigen::MatrixXd h;
  LogEval out;
  out.value = lp.evaluate(z, g, &h);
  out.gradient = Eigen::VectorXd::Zero(vars.size());
  out.hessian = Eigen::MatrixXd::Zero(vars.size(), vars.size());
  const auto& s = lp.support();
  for (std::size_t i = 0; i < s.size(); ++i) {
    out.gradient(s[i]) = g(i);
    for (std::size_t j = 0; j < s.size(); ++j) out.hessian(s[i], s[j]) = h(i, j);
  }
  return out;
}

}  // namespace posgp
