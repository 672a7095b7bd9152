#pragma once

// Positive LTI (and delay) systems: numeric and parametrized models, plus the
// numerical oracles used to certify synthesized parameters.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "posgp/posynomial.hpp"

namespace posgp {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Hurwitz means spectral abscissa below this threshold.
inline constexpr double kHurwitzThreshold = -1e-12;

inline bool is_metzler(const MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (i != j && !(m(i, j) >= 0.0)) return false;
  return true;
}
inline bool is_nonnegative(const MatrixXd& m) { return (m.array() >= 0.0).all(); }

struct DelayBlock {
  MatrixXd Ad;  // n_x x n_x, nonnegative
  MatrixXd Cd;  // n_y x n_x, nonnegative
  double h = 0.0;
};

/// dx = F x (+ Ad x(t-h)) + G w,  y = H x (+ Cd x(t-h))
class NumericSystem {
 public:
  NumericSystem(MatrixXd F, MatrixXd G, MatrixXd H, std::optional<DelayBlock> delay = std::nullopt)
      : F_(std::move(F)), G_(std::move(G)), H_(std::move(H)), delay_(std::move(delay)) {
    if (F_.rows() != F_.cols()) throw std::invalid_argument("F must be square");
    if (G_.rows() != F_.rows()) throw std::invalid_argument("G must have n_x rows");
    if (H_.cols() != F_.rows()) throw std::invalid_argument("H must have n_x columns");
    if (!is_metzler(F_)) throw std::invalid_argument("F is not Metzler");
    if (!is_nonnegative(G_) || !is_nonnegative(H_)) throw std::invalid_argument("G and H must be nonnegative");
    if (delay_) {
      if (delay_->Ad.rows() != F_.rows() || delay_->Ad.cols() != F_.cols())
        throw std::invalid_argument("Ad must be n_x x n_x");
      if (delay_->Cd.rows() != H_.rows() || delay_->Cd.cols() != F_.cols())
        throw std::invalid_argument("Cd must be n_y x n_x");
      if (!is_nonnegative(delay_->Ad) || !is_nonnegative(delay_->Cd))
        throw std::invalid_argument("Ad and Cd must be nonnegative");
      if (!(delay_->h > 0.0)) throw std::invalid_argument("delay h must be positive");
    }
  }

  const MatrixXd& F() const { return F_; }
  const MatrixXd& G() const { return G_; }
  const MatrixXd& H() const { return H_; }
  const std::optional<DelayBlock>& delay() const { return delay_; }
  Eigen::Index nx() const { return F_.rows(); }
  Eigen::Index nw() const { return G_.cols(); }
  Eigen::Index ny() const { return H_.rows(); }

 private:
  MatrixXd F_, G_, H_;
  std::optional<DelayBlock> delay_;
};

/// R(theta) = r(theta) * R0 with a constant positive diagonal R0.
struct R0Factorization {
  Monomial r;
  VectorXd R0;
  bool operator==(const R0Factorization& o) const { return r == o.r && R0 == o.R0; }
};

struct ParamDelay {
  PosyMatrix Ad;
  PosyMatrix Cd;
  double h = 0.0;
  bool operator==(const ParamDelay& o) const { return Ad == o.Ad && Cd == o.Cd && h == o.h; }
};

/// A(theta) = Atilde(theta) - R(theta). With a delay block, Atilde stands for
/// A + Ad + R so that A(theta) = Atilde - Ad - R.
struct ParamSystem {
  VarSpace vars;
  PosyMatrix Atilde;
  DiagMonoMatrix R;
  PosyMatrix B;
  PosyMatrix C;
  std::optional<ParamDelay> delay;
  std::optional<R0Factorization> r0;

  std::size_t nx() const { return Atilde.rows(); }
  std::size_t nw() const { return B.cols(); }
  std::size_t ny() const { return C.rows(); }

  static DiagMonoMatrix diag_from_factor(const R0Factorization& f) {
    std::vector<Monomial> d;
    for (Eigen::Index i = 0; i < f.R0.size(); ++i) d.push_back(f.r.scaled(f.R0(i)));
    return DiagMonoMatrix(d);
  }

  void validate() const {
    const std::size_t n = nx();
    if (Atilde.cols() != n) throw std::invalid_argument("Atilde must be square");
    if (R.size() != n) throw std::invalid_argument("R must have n_x diagonal entries");
    if (B.rows() != n) throw std::invalid_argument("B must have n_x rows");
    if (C.cols() != n) throw std::invalid_argument("C must have n_x columns");
    auto check_vars = [&](const std::vector<std::string>& names, const char* what) {
      for (const auto& v : names)
        if (!vars.contains(v)) throw std::invalid_argument(std::string("unknown variable '") + v + "' in " + what);
    };
    check_vars(Atilde.variables(), "Atilde");
    check_vars(R.as_matrix().variables(), "R");
    check_vars(B.variables(), "B");
    check_vars(C.variables(), "C");
    if (delay) {
      if (delay->Ad.rows() != n || delay->Ad.cols() != n) throw std::invalid_argument("Ad must be n_x x n_x");
      if (delay->Cd.rows() != ny() || delay->Cd.cols() != n) throw std::invalid_argument("Cd must be n_y x n_x");
      if (!(delay->h > 0.0)) throw std::invalid_argument("delay h must be positive");
      check_vars(delay->Ad.variables(), "Ad");
      check_vars(delay->Cd.variables(), "Cd");
    }
    if (r0) {
      if (static_cast<std::size_t>(r0->R0.size()) != n) throw std::invalid_argument("R0 must have n_x entries");
      if (!(r0->R0.array() > 0.0).all()) throw std::invalid_argument("R0 entries must be positive");
      check_vars(Posynomial(r0->r).variables(), "r");
      for (std::size_t i = 0; i < n; ++i) {
        const Monomial expect = r0->r.scaled(r0->R0(i));
        if (expect.exponents() != R[i].exponents() ||
            std::abs(expect.coeff() - R[i].coeff()) > 1e-12 * std::abs(R[i].coeff()))
          throw std::invalid_argument("R is not r(theta) * R0");
      }
    }
  }
};

struct InstantiateOptions {
  bool require_hurwitz = false;
};

inline double spectral_abscissa(const MatrixXd& m) {
  if (m.rows() == 0) return -std::numeric_limits<double>::infinity();
  Eigen::EigenSolver<MatrixXd> es(m, false);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalue iteration did not converge");
  return es.eigenvalues().real().maxCoeff();
}
inline bool is_hurwitz(const MatrixXd& m) { return spectral_abscissa(m) < kHurwitzThreshold; }

/// Numeric system at theta; throws if F = Atilde - R (- Ad) is not Metzler
/// or, when requested, not Hurwitz.
inline NumericSystem instantiate(const ParamSystem& ps, const Point& theta, InstantiateOptions opt = {}) {
  ps.validate();
  MatrixXd F = ps.Atilde.eval(theta);
  F.diagonal() -= ps.R.eval(theta);
  std::optional<DelayBlock> d;
  if (ps.delay) {
    d = DelayBlock{ps.delay->Ad.eval(theta), ps.delay->Cd.eval(theta), ps.delay->h};
    F -= d->Ad;
  }
  if (!is_metzler(F)) throw std::invalid_argument("instantiated A(theta) is not Metzler");
  NumericSystem s(F, ps.B.eval(theta), ps.C.eval(theta), d);
  if (opt.require_hurwitz) {
    const MatrixXd stab = d ? MatrixXd(F + d->Ad) : F;
    if (!is_hurwitz(stab)) throw std::invalid_argument("instantiated system is not Hurwitz");
  }
  return s;
}

// ---------------------------------------------------------------- Kronecker

inline MatrixXd kron(const MatrixXd& a, const MatrixXd& b) {
  MatrixXd k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}
inline MatrixXd kron_sum(const MatrixXd& a, const MatrixXd& b) {
  return kron(a, MatrixXd::Identity(b.rows(), b.rows())) + kron(MatrixXd::Identity(a.rows(), a.rows()), b);
}
/// a (+) O_m (+) b
inline MatrixXd kron_sum_padded(const MatrixXd& a, Eigen::Index m, const MatrixXd& b) {
  return kron_sum(a, kron(MatrixXd::Identity(m, m), b));
}

/// Grammian factors: W_C = -B1 (A (+) O_nw (+) A^T)^{-1} B2 and
/// W_O = -C1 (A^T (+) O_ny (+) A)^{-1} C2.
template <class M>
struct BarMatrices {
  M B1, B2, C1, C2;
};

inline BarMatrices<MatrixXd> build_bar_matrices(const MatrixXd& B, const MatrixXd& C) {
  const Eigen::Index n = B.rows(), nw = B.cols(), ny = C.rows();
  BarMatrices<MatrixXd> bar{MatrixXd::Zero(n, n * n * nw), MatrixXd::Zero(n * n * nw, n),
                            MatrixXd::Zero(n, n * n * ny), MatrixXd::Zero(n * n * ny, n)};
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < n; ++k) {
      for (Eigen::Index w = 0; w < nw; ++w) {
        bar.B1(i, i * nw * n + w * n + k) = B(k, w);
        bar.B2((k * nw + w) * n + i, i) = B(k, w);
      }
      for (Eigen::Index y = 0; y < ny; ++y) {
        bar.C1(i, i * ny * n + y * n + k) = C(y, k);
        bar.C2((k * ny + y) * n + i, i) = C(y, k);
      }
    }
  return bar;
}

inline BarMatrices<PosyMatrix> build_bar_matrices(const PosyMatrix& B, const PosyMatrix& C) {
  const std::size_t n = B.rows(), nw = B.cols(), ny = C.rows();
  BarMatrices<PosyMatrix> bar{PosyMatrix(n, n * n * nw), PosyMatrix(n * n * nw, n), PosyMatrix(n, n * n * ny),
                              PosyMatrix(n * n * ny, n)};
  for (const auto& [kw, p] : B.entries()) {
    const auto [k, w] = kw;
    for (std::size_t i = 0; i < n; ++i) {
      bar.B1.set(i, i * nw * n + w * n + k, p);
      bar.B2.set((k * nw + w) * n + i, i, p);
    }
  }
  for (const auto& [yk, p] : C.entries()) {
    const auto [y, k] = yk;
    for (std::size_t i = 0; i < n; ++i) {
      bar.C1.set(i, i * ny * n + y * n + k, p);
      bar.C2.set((k * ny + y) * n + i, i, p);
    }
  }
  return bar;
}

// ---------------------------------------------------------------- Lyapunov

/// Solves A X + X A^T + Q = 0 for Hurwitz A (Bartels-Stewart on the complex
/// Schur form).
inline MatrixXd solve_lyapunov(const MatrixXd& A, const MatrixXd& Q) {
  using Cplx = std::complex<double>;
  using CMat = Eigen::MatrixXcd;
  const Eigen::Index n = A.rows();
  Eigen::ComplexSchur<MatrixXd> schur(A);
  if (schur.info() != Eigen::Success) throw std::runtime_error("Schur decomposition did not converge");
  const CMat& U = schur.matrixU();
  const CMat& T = schur.matrixT();
  CMat rhs = -(U.adjoint() * Q.cast<Cplx>() * U);
  CMat Y = CMat::Zero(n, n);
  // T Y + Y T^H = rhs, columns right to left
  for (Eigen::Index j = n - 1; j >= 0; --j) {
    Eigen::VectorXcd c = rhs.col(j);
    for (Eigen::Index k = j + 1; k < n; ++k) c -= Y.col(k) * std::conj(T(j, k));
    CMat sys = T;
    sys.diagonal().array() += std::conj(T(j, j));
    Y.col(j) = sys.triangularView<Eigen::Upper>().solve(c);
  }
  MatrixXd X = (U * Y * U.adjoint()).real();
  return 0.5 * (X + X.transpose());
}

struct Grammians {
  MatrixXd controllability;
  MatrixXd observability;
};

inline void require_hurwitz(const NumericSystem& s) {
  if (!is_hurwitz(s.F())) throw std::domain_error("system is not internally stable");
}

inline Grammians grammians_lyapunov(const NumericSystem& s) {
  require_hurwitz(s);
  return {solve_lyapunov(s.F(), s.G() * s.G().transpose()),
          solve_lyapunov(s.F().transpose(), s.H().transpose() * s.H())};
}

inline Grammians grammians_kronecker(const NumericSystem& s) {
  require_hurwitz(s);
  const auto bar = build_bar_matrices(s.G(), s.H());
  const MatrixXd kc = kron_sum_padded(s.F(), s.nw(), s.F().transpose());
  const MatrixXd ko = kron_sum_padded(s.F().transpose(), s.ny(), s.F());
  MatrixXd wc = -bar.B1 * kc.partialPivLu().solve(bar.B2);
  MatrixXd wo = -bar.C1 * ko.partialPivLu().solve(bar.C2);
  return {0.5 * (wc + wc.transpose()), 0.5 * (wo + wo.transpose())};
}

/// Thrown when two independent routes to the same quantity disagree.
struct OracleDisagreement : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kCrossCheckTol = 1e-6;
// Dense Kronecker cross-checks are skipped beyond this order.
inline constexpr Eigen::Index kMaxKroneckerOrder = 1200;

inline bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

// ------------------------------------------------------------------- norms

/// H2 norm via -Htilde (F (+) F)^{-1} Gtilde, cross-checked against the
/// Lyapunov route.
inline double h2_norm(const NumericSystem& s) {
  require_hurwitz(s);
  const Eigen::Index n = s.nx();
  const MatrixXd ggt = s.G() * s.G().transpose(), hth = s.H().transpose() * s.H();
  const MatrixXd wc = solve_lyapunov(s.F(), ggt);
  const double lyap = (s.H() * wc * s.H().transpose()).trace();
  if (n * n > kMaxKroneckerOrder) return std::sqrt(std::max(lyap, 0.0));
  VectorXd gt(n * n);
  Eigen::RowVectorXd ht(n * n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) {
      gt(a * n + b) = ggt(a, b);
      ht(a * n + b) = hth(a, b);
    }
  const double kr = -ht.dot(kron_sum(s.F(), s.F()).partialPivLu().solve(gt));
  if (!close_rel(kr, lyap, kCrossCheckTol))
    throw OracleDisagreement("H2 routes disagree: " + format_number(kr) + " vs " + format_number(lyap));
  return std::sqrt(std::max(kr, 0.0));
}

/// For positive systems the H-infinity norm is attained at zero frequency.
inline double hinf_norm(const NumericSystem& s) {
  require_hurwitz(s);
  if (s.nw() == 0 || s.ny() == 0) return 0.0;
  const MatrixXd g0 = -s.H() * s.F().partialPivLu().solve(s.G());
  Eigen::JacobiSVD<MatrixXd> svd(g0);
  return svd.singularValues()(0);
}

/// max over the given frequencies of the largest singular value of H (jw - F)^{-1} G.
inline double hinf_frequency_sweep(const NumericSystem& s, const std::vector<double>& omegas) {
  using Cplx = std::complex<double>;
  double best = 0.0;
  for (double w : omegas) {
    Eigen::MatrixXcd m = -s.F().cast<Cplx>();
    m.diagonal().array() += Cplx(0.0, w);
    Eigen::MatrixXcd tf = s.H().cast<Cplx>() * m.partialPivLu().solve(s.G().cast<Cplx>());
    if (tf.size() == 0) continue;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(tf);
    best = std::max(best, svd.singularValues()(0));
  }
  return best;
}

inline std::vector<double> log_grid(double lo, double hi, int points) {
  std::vector<double> g;
  for (int i = 0; i < points; ++i) g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1)));
  return g;
}

/// sqrt(eig(W_O W_C)) in descending order.
inline std::vector<double> hankel_singular_values(const NumericSystem& s) {
  const Grammians g = grammians_lyapunov(s);
  if (s.nx() * s.nx() * std::max(s.nw(), s.ny()) <= kMaxKroneckerOrder) {
    const Grammians k = grammians_kronecker(s);
    const double scale = 1.0 + g.controllability.cwiseAbs().maxCoeff() + g.observability.cwiseAbs().maxCoeff();
    if ((k.controllability - g.controllability).cwiseAbs().maxCoeff() > kCrossCheckTol * scale ||
        (k.observability - g.observability).cwiseAbs().maxCoeff() > kCrossCheckTol * scale)
      throw OracleDisagreement("Grammian routes disagree");
  }
  VectorXd ev;
  Eigen::SelfAdjointEigenSolver<MatrixXd> wc_eig(g.controllability);
  if (wc_eig.info() == Eigen::Success && wc_eig.eigenvalues().minCoeff() > 1e-14 * (1.0 + wc_eig.eigenvalues().maxCoeff())) {
    // symmetric form W_C^{1/2} W_O W_C^{1/2}
    const MatrixXd root = wc_eig.operatorSqrt();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(root * g.observability * root, Eigen::EigenvaluesOnly);
    ev = es.eigenvalues();
  } else {
    Eigen::EigenSolver<MatrixXd> es(g.observability * g.controllability, false);
    ev = es.eigenvalues().real();
  }
  std::vector<double> sv;
  for (Eigen::Index i = 0; i < ev.size(); ++i) sv.push_back(std::sqrt(std::max(ev(i), 0.0)));
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

inline double schatten_norm(const std::vector<double>& sv, int p) {
  if (p < 1) throw std::invalid_argument("Schatten order must be positive");
  double acc = 0.0;
  for (double s : sv) acc += std::pow(s, p);
  return std::pow(acc, 1.0 / p);
}

// ------------------------------------------------------------ robustness

/// Block-diagonal nonnegative uncertainty: full square blocks of the given
/// orders followed by scalar (1x1) blocks.
struct BlockPattern {
  std::vector<std::size_t> full_blocks;
  std::size_t scalar_blocks = 0;

  std::size_t size() const {
    std::size_t m = scalar_blocks;
    for (auto b : full_blocks) m += b;
    return m;
  }
  std::size_t num_blocks() const { return full_blocks.size() + scalar_blocks; }
  /// Block index owning each of the m rows.
  std::vector<std::size_t> owner() const {
    std::vector<std::size_t> o;
    for (std::size_t k = 0; k < full_blocks.size(); ++k) o.insert(o.end(), full_blocks[k], k);
    for (std::size_t k = 0; k < scalar_blocks; ++k) o.push_back(full_blocks.size() + k);
    return o;
  }
  bool operator==(const BlockPattern& o) const {
    return full_blocks == o.full_blocks && scalar_blocks == o.scalar_blocks;
  }
};

namespace detail {

// Perron eigenvector (absolute values) of a Metzler matrix.
inline VectorXd perron_vector(const MatrixXd& m) {
  Eigen::EigenSolver<MatrixXd> es(m);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalue iteration did not converge");
  Eigen::Index k;
  es.eigenvalues().real().maxCoeff(&k);
  VectorXd v = es.eigenvectors().col(k).real().cwiseAbs();
  const double nrm = v.norm();
  return nrm > 0 ? VectorXd(v / nrm) : VectorXd::Ones(m.rows()) / std::sqrt(double(m.rows()));
}

}  // namespace detail

/// Lower estimate of sup lambda_max(F + G Delta H) over structured
/// nonnegative Delta with spectral norm <= eps. Tries structured extreme
/// candidates, a Perron-gradient refinement, then `samples` seeded random
/// draws; more samples never lower the estimate.
inline double robust_abscissa_estimate(const NumericSystem& s, const BlockPattern& pattern, double eps,
                                       int samples = 200, std::uint64_t seed = 0) {
  const auto m = static_cast<Eigen::Index>(pattern.size());
  if (s.nw() != m || s.ny() != m) throw std::invalid_argument("uncertainty size must match n_w = n_y");
  if (eps < 0.0) throw std::invalid_argument("eps must be nonnegative");
  double best = spectral_abscissa(s.F());
  if (eps == 0.0 || m == 0) return best;

  auto assemble = [&](const std::vector<MatrixXd>& full) {
    MatrixXd d = MatrixXd::Zero(m, m);
    Eigen::Index off = 0;
    for (std::size_t k = 0; k < pattern.full_blocks.size(); ++k) {
      const auto b = static_cast<Eigen::Index>(pattern.full_blocks[k]);
      d.block(off, off, b, b) = full[k];
      off += b;
    }
    for (; off < m; ++off) d(off, off) = eps;  // scalars at their extreme
    return d;
  };
  auto closed_loop = [&](const MatrixXd& d) { return MatrixXd(s.F() + s.G() * d * s.H()); };
  auto consider = [&](const std::vector<MatrixXd>& full) {
    const MatrixXd d = assemble(full);
    best = std::max(best, spectral_abscissa(closed_loop(d)));
    return d;
  };

  // all-ones blocks
  std::vector<MatrixXd> full;
  for (auto b : pattern.full_blocks) full.push_back(MatrixXd::Constant(b, b, eps / double(b)));
  MatrixXd d = consider(full);

  // rank-one blocks aligned with the gradient of lambda_max
  for (int it = 0; it < 30; ++it) {
    const MatrixXd cl = closed_loop(d);
    const VectorXd right = detail::perron_vector(cl), left = detail::perron_vector(cl.transpose());
    const VectorXd a = s.G().transpose() * left, b = s.H() * right;
    Eigen::Index off = 0;
    for (std::size_t k = 0; k < pattern.full_blocks.size(); ++k) {
      const auto sz = static_cast<Eigen::Index>(pattern.full_blocks[k]);
      const VectorXd ak = a.segment(off, sz), bk = b.segment(off, sz);
      if (ak.norm() > 0 && bk.norm() > 0) full[k] = eps * (ak / ak.norm()) * (bk / bk.norm()).transpose();
      off += sz;
    }
    d = consider(full);
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int smp = 0; smp < samples; ++smp) {
    for (std::size_t k = 0; k < pattern.full_blocks.size(); ++k) {
      const auto b = static_cast<Eigen::Index>(pattern.full_blocks[k]);
      MatrixXd blk(b, b);
      if (smp % 2 == 0) {
        VectorXd u(b), v(b);
        for (Eigen::Index i = 0; i < b; ++i) {
          u(i) = unif(rng);
          v(i) = unif(rng);
        }
        blk = (u / u.norm()) * (v / v.norm()).transpose();
      } else {
        for (Eigen::Index i = 0; i < b; ++i)
          for (Eigen::Index j = 0; j < b; ++j) blk(i, j) = unif(rng);
        blk /= Eigen::JacobiSVD<MatrixXd>(blk).singularValues()(0);
      }
      full[k] = eps * blk;
    }
    consider(full);
  }
  return best;
}

// ------------------------------------------------------------------ delays

struct DelayGains {
  double l1 = 0.0;    // max column sum of (H + Cd)(-F - Ad)^{-1} G
  double linf = 0.0;  // max row sum
};

inline const DelayBlock& require_delay(const NumericSystem& s) {
  if (!s.delay()) throw std::invalid_argument("system has no delay block");
  return *s.delay();
}

inline DelayGains delay_gains(const NumericSystem& s) {
  const DelayBlock& d = require_delay(s);
  const MatrixXd sum = s.F() + d.Ad;
  if (!is_hurwitz(sum)) throw std::domain_error("F + Ad is not Hurwitz");
  const MatrixXd g0 = (s.H() + d.Cd) * (-sum).partialPivLu().solve(s.G());
  DelayGains out;
  if (g0.size() == 0) return out;
  out.l1 = g0.colwise().sum().maxCoeff();
  out.linf = g0.rowwise().sum().maxCoeff();
  return out;
}

/// F + rho I + e^{rho h} Ad is Hurwitz.
inline bool delay_decay_check(const NumericSystem& s, double rho) {
  const DelayBlock& d = require_delay(s);
  MatrixXd m = s.F() + std::exp(rho * d.h) * d.Ad;
  m.diagonal().array() += rho;
  return is_hurwitz(m);
}

/// Largest rho passing delay_decay_check, by bisection (0 if none).
inline double delay_decay_rate(const NumericSystem& s, double tol = 1e-12) {
  if (!delay_decay_check(s, 0.0)) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (delay_decay_check(s, hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) return hi;
  }
  while (hi - lo > tol * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    (delay_decay_check(s, mid) ? lo : hi) = mid;
  }
  return lo;
}

/// Forward-Euler integration of the unforced delay system with step h/200,
/// constant history x(t) = x0 for t <= 0. Returns the state at each step.
inline std::vector<VectorXd> simulate_delay(const NumericSystem& s, const VectorXd& x0, double horizon) {
  const DelayBlock& d = require_delay(s);
  constexpr int kStepsPerDelay = 200;
  const double dt = d.h / kStepsPerDelay;
  const auto steps = static_cast<std::size_t>(std::ceil(horizon / dt));
  std::vector<VectorXd> xs{x0};
  xs.reserve(steps + 1);
  for (std::size_t k = 0; k < steps; ++k) {
    const VectorXd& lagged = k >= kStepsPerDelay ? xs[k - kStepsPerDelay] : x0;
    xs.push_back(xs[k] + dt * (s.F() * xs[k] + d.Ad * lagged));
  }
  return xs;
}

// ------------------------------------------------------------------ report

struct NormReport {
  bool stable = false;
  double spectral_abscissa = 0.0;  // of F (of F + Ad for delay systems)
  std::optional<double> h2, hinf;
  std::vector<double> hankel_sv;
  std::map<int, double> schatten;
  std::optional<double> l1_gain, linf_gain, decay_rate_lb;
};

inline NormReport norm_report(const NumericSystem& s, const std::vector<int>& schatten_orders = {2}) {
  NormReport r;
  if (s.delay()) {
    r.spectral_abscissa = spectral_abscissa(s.F() + s.delay()->Ad);
    r.stable = r.spectral_abscissa < kHurwitzThreshold;
    if (!r.stable) return r;
    const DelayGains g = delay_gains(s);
    r.l1_gain = g.l1;
    r.linf_gain = g.linf;
    r.decay_rate_lb = delay_decay_rate(s);
    return r;
  }
  r.spectral_abscissa = spectral_abscissa(s.F());
  r.stable = r.spectral_abscissa < kHurwitzThreshold;
  if (!r.stable) return r;
  r.h2 = h2_norm(s);
  r.hinf = hinf_norm(s);
  r.hankel_sv = hankel_singular_values(s);
  for (int p : schatten_orders) r.schatten[p] = schatten_norm(r.hankel_sv, p);
  return r;
}

}  // namespace posgp
