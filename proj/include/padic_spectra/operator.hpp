#ifndef PADIC_SPECTRA_OPERATOR_HPP
#define PADIC_SPECTRA_OPERATOR_HPP

// Realizations A_B of D^alpha + sum_ij b_ij <delta_{x_j}, .> delta_{x_i}.
//
// Domain elements are f = u + sum_k c_k h_{k,-1} with boundary values
// Gamma_0 f = (f(x_1), ..., f(x_n)) and Gamma_1 f = -(c_1, ..., c_n); A_B is
// the restriction to B Gamma_0 f = Gamma_1 f. Its discrete spectrum off the
// points p^{alpha N} is the zero set of det[B M(l) + I] with
// M(l) = [M_{|x_i - x_j|_p}(l)], and
//
//   R_l f = (D^alpha - l)^{-1} f - sum_k w_k h_{k,l},   [B M(l) + I] w = B v,
//
// v_k = (f, h_{k, conj l}).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "padic_spectra/green.hpp"
#include "padic_spectra/mseries.hpp"
#include "padic_spectra/roots.hpp"
#include "padic_spectra/wavelet.hpp"

namespace padic_spectra {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Entrywise Hermitian test with absolute tolerance.
inline bool is_hermitian(const Matrix& a, double tol = 1e-12) {
  if (a.rows() != a.cols())
    return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (std::abs(a(i, j) - std::conj(a(j, i))) > tol)
        return false;
  return true;
}

inline std::pair<double, double> singular_extremes(const Matrix& a) {
  if (a.size() == 0)
    return {0.0, 0.0};
  const Eigen::JacobiSVD<Matrix> svd(a);
  const auto& s = svd.singularValues();
  return {s(s.size() - 1), s(0)};
}

struct RealizationConfig {
  PrimeContext ctx;
  double alpha;
  std::vector<PAdicRational> points;
  Matrix B;
  std::optional<Matrix> eta;

  RealizationConfig(PrimeContext c, double a, std::vector<PAdicRational> y, Matrix b,
                    std::optional<Matrix> e = std::nullopt)
      : ctx(c), alpha(a), points(std::move(y)), B(std::move(b)), eta(std::move(e)) {
    validate();
  }

  std::size_t size() const noexcept { return points.size(); }

  void validate() const {
    if (!(alpha > 1.0) || !std::isfinite(alpha))
      throw validation_error("realizations need alpha > 1");
    if (points.empty())
      throw validation_error("the point set Y is empty");
    for (std::size_t i = 0; i < points.size(); ++i) {
      PAdicRational::check_same(points[i], PAdicRational(ctx, 0));
      for (std::size_t j = 0; j < i; ++j)
        if (points[i] == points[j])
          throw validation_error("points of Y must be distinct");
    }
    const auto n = static_cast<Eigen::Index>(points.size());
    if (B.rows() != n || B.cols() != n)
      throw validation_error("B must be " + std::to_string(n) + "x" + std::to_string(n));
    if (!B.allFinite())
      throw validation_error("B has non-finite entries");
    if (eta) {
      if (eta->rows() != n || eta->cols() != n)
        throw validation_error("eta matrix has the wrong shape");
      const auto [smin, smax] = singular_extremes(*eta);
      if (!(smin > 1e-12 * smax))
        throw validation_error("eta matrix is not invertible");
    }
  }

  /// Singular B: det[B M + I] still encodes B Gamma_0 = Gamma_1, but the
  /// classical eigenvalue criterion assumes B invertible.
  bool singular_B() const {
    const auto [smin, smax] = singular_extremes(B);
    return !(smin > 1e-12 * smax);
  }

  /// gamma_ij = log_p |x_i - x_j|_p off the diagonal.
  long distance(std::size_t i, std::size_t j) const { return *distance_exponent(points[i], points[j]); }
};

enum class Realization { self_adjoint, eta_self_adjoint, neither };

inline const char* to_string(Realization r) {
  switch (r) {
  case Realization::self_adjoint:
    return "self_adjoint";
  case Realization::eta_self_adjoint:
    return "eta_self_adjoint";
  default:
    return "neither";
  }
}

/// Self-adjoint iff B is Hermitian; eta-self-adjoint iff (eta B) is
/// Hermitian. With require_eta the eta test is mandatory.
inline Realization classify_realization(const RealizationConfig& cfg, bool require_eta = false) {
  if (require_eta && !cfg.eta)
    throw validation_error("eta-self-adjointness requested without an eta matrix");
  if (is_hermitian(cfg.B))
    return Realization::self_adjoint;
  if (cfg.eta && is_hermitian(Matrix(*cfg.eta * cfg.B)))
    return Realization::eta_self_adjoint;
  return Realization::neither;
}

/// Permutation matrix of x -> -x on Y: entry (i, j) is 1 iff x_i = -x_j.
inline Matrix eta_matrix_parity(const std::vector<PAdicRational>& points) {
  const auto n = static_cast<Eigen::Index>(points.size());
  Matrix y = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    bool found = false;
    for (Eigen::Index j = 0; j < n; ++j)
      if (points[i] == -points[j]) {
        y(i, j) = 1.0;
        found = true;
      }
    if (!found)
      throw validation_error("point set is not closed under x -> -x");
  }
  return y;
}

/// M(l) with the largest entry error bound.
struct MMatrix {
  Matrix value;
  double error_bound = 0.0;
};

inline MMatrix build_M(const MSeries& series, const std::vector<PAdicRational>& points, complex lambda,
                       double tol = default_series_tol, bool derivative = false) {
  const auto n = static_cast<Eigen::Index>(points.size());
  MMatrix out{Matrix::Zero(n, n), 0.0};
  const MEvaluation diag = derivative ? series.m0_prime(lambda, tol) : series.m0(lambda, tol);
  std::map<long, MEvaluation> by_gamma;
  for (Eigen::Index i = 0; i < n; ++i) {
    out.value(i, i) = diag.value;
    for (Eigen::Index j = 0; j < i; ++j) {
      const long g = *distance_exponent(points[i], points[j]);
      auto it = by_gamma.find(g);
      if (it == by_gamma.end())
        it = by_gamma
                 .emplace(g, derivative ? series.m_gamma_prime(g, lambda, tol) : series.m_gamma(g, lambda, tol))
                 .first;
      out.value(i, j) = out.value(j, i) = it->second.value;
      out.error_bound = std::max(out.error_bound, it->second.error_bound);
    }
  }
  out.error_bound = std::max(out.error_bound, diag.error_bound);
  return out;
}

inline MMatrix build_M(const RealizationConfig& cfg, complex lambda, double tol = default_series_tol) {
  return build_M(MSeries(cfg.ctx, cfg.alpha), cfg.points, lambda, tol);
}

/// K(l) = B M(l) + I.
inline Matrix char_matrix(const RealizationConfig& cfg, const MSeries& series, complex lambda,
                          double tol = default_series_tol) {
  const auto n = static_cast<Eigen::Index>(cfg.size());
  return cfg.B * build_M(series, cfg.points, lambda, tol).value + Matrix::Identity(n, n);
}

/// det[B M(l) + I].
inline complex char_det(const RealizationConfig& cfg, complex lambda, double tol = default_series_tol) {
  return char_matrix(cfg, MSeries(cfg.ctx, cfg.alpha), lambda, tol).determinant();
}

/// Product of column norms: an upper bound on |det K|, used as its scale.
inline double hadamard_bound(const Matrix& k) {
  double b = 1.0;
  for (Eigen::Index j = 0; j < k.cols(); ++j)
    b *= std::max(k.col(j).norm(), 1e-300);
  return b;
}

struct EigenvalueRecord {
  complex lambda;
  /// N of (p^{aN}, p^{a(N+1)}); empty on the negative axis or off the axis.
  std::optional<long> interval;
  bool negative_axis = false;
  int multiplicity = 1;
  /// Smallest singular value of the characteristic matrix at lambda.
  double residual = 0.0;
  /// Largest singular value there; multiplicity counts singular values
  /// below largest * null_threshold.
  double sigma_max = 0.0;
  /// Uncertainty of lambda (bracket width or last Newton step).
  double uncertainty = 0.0;
  /// Produced with a singular B, outside the invertible-B theory.
  bool extension = false;
  /// "sign-change", "touching" or "contour".
  std::string method;
};

/// A family l -> K(l) of small matrices whose singularity defines eigenvalues.
struct CharacteristicFamily {
  std::function<Matrix(complex)> K;
  /// dK/dl, for Newton steps in the complex search.
  std::function<Matrix(complex)> dK;
  /// Realization gives a real det on the real axis.
  bool real_on_axis = true;
  bool extension = false;
};

inline CharacteristicFamily characteristic_family(const RealizationConfig& cfg, double tol = default_series_tol) {
  const MSeries series(cfg.ctx, cfg.alpha);
  const auto n = static_cast<Eigen::Index>(cfg.size());
  CharacteristicFamily fam;
  fam.K = [cfg, series, tol, n](complex l) {
    return Matrix(cfg.B * build_M(series, cfg.points, l, tol).value + Matrix::Identity(n, n));
  };
  fam.dK = [cfg, series, tol](complex l) {
    return Matrix(cfg.B * build_M(series, cfg.points, l, tol, true).value);
  };
  fam.real_on_axis = classify_realization(cfg) != Realization::neither;
  fam.extension = cfg.singular_B();
  return fam;
}

/// K(l) = M(l): the hard condition Gamma_0 f = 0 (B = infinity).
inline CharacteristicFamily friedrichs_family(const PrimeContext& ctx, double alpha,
                                              const std::vector<PAdicRational>& points,
                                              double tol = default_series_tol) {
  const MSeries series(ctx, alpha);
  CharacteristicFamily fam;
  fam.K = [series, points, tol](complex l) { return build_M(series, points, l, tol).value; };
  fam.dK = [series, points, tol](complex l) { return build_M(series, points, l, tol, true).value; };
  return fam;
}

struct RealSpectrumOptions {
  long n_lo = -3;
  long n_hi = 3;
  bool negative_axis = false;
  ScanOptions scan;
};

namespace detail {

inline EigenvalueRecord make_record(const CharacteristicFamily& fam, const RootHit& hit, std::optional<long> interval,
                                    double null_threshold) {
  EigenvalueRecord rec;
  rec.lambda = hit.lambda;
  rec.interval = interval;
  rec.negative_axis = !interval;
  const Matrix k = fam.K(hit.lambda);
  const Eigen::JacobiSVD<Matrix> svd(k);
  const auto& s = svd.singularValues();
  rec.sigma_max = s(0);
  rec.residual = s(s.size() - 1);
  int null_dim = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) <= null_threshold * s(0))
      ++null_dim;
  rec.multiplicity = std::max(1, null_dim);
  rec.uncertainty = hit.width;
  rec.extension = fam.extension;
  rec.method = hit.tangent ? "touching" : "sign-change";
  return rec;
}

inline std::vector<RootHit> scan_samples(const CharacteristicFamily& fam, const std::vector<double>& samples,
                                         const ScanOptions& opt) {
  auto f = [&](double l) {
    const Matrix k = fam.K(l);
    const complex d = k.determinant();
    if (std::abs(d.imag()) > 1e-8 * (1.0 + hadamard_bound(k)))
      throw validation_error("characteristic function is not real on the axis; use the complex search");
    return d.real();
  };
  auto null_measure = [&](double l) {
    const auto [smin, smax] = singular_extremes(fam.K(l));
    return smax > 0 ? smin / smax : 0.0;
  };
  RealScanner scanner(f, null_measure, opt);
  return scanner.scan(samples);
}

} // namespace detail

/// Real eigenvalues of a family in (p^{aN}, p^{a(N+1)}), N = n_lo..n_hi, and
/// optionally on (-inf, 0). Intervals run concurrently; the result is ordered
/// by interval, negative axis first.
inline std::vector<EigenvalueRecord> find_real_eigenvalues(const PrimeContext& ctx, double alpha,
                                                           const CharacteristicFamily& fam,
                                                           const RealSpectrumOptions& opt) {
  if (!fam.real_on_axis)
    throw validation_error("B is neither Hermitian nor eta-Hermitian; the characteristic function is not real");
  if (opt.n_lo > opt.n_hi)
    throw validation_error("empty interval window");
  const std::size_t jobs = static_cast<std::size_t>(opt.n_hi - opt.n_lo + 1) + (opt.negative_axis ? 1 : 0);
  auto results = parallel_map<std::vector<EigenvalueRecord>>(jobs, [&](std::size_t job) {
    std::vector<EigenvalueRecord> recs;
    const bool neg = opt.negative_axis && job == 0;
    const long n = opt.n_lo + static_cast<long>(job) - (opt.negative_axis ? 1 : 0);
    const auto samples = neg ? negative_axis_samples(opt.scan, zero_guard_abs)
                             : interval_samples(ctx, alpha, n, opt.scan);
    for (const auto& hit : detail::scan_samples(fam, samples, opt.scan))
      recs.push_back(detail::make_record(fam, hit, neg ? std::nullopt : std::optional<long>(n),
                                         opt.scan.null_threshold));
    return recs;
  });
  std::vector<EigenvalueRecord> out;
  for (auto& r : results)
    out.insert(out.end(), r.begin(), r.end());
  return out;
}

inline std::vector<EigenvalueRecord> find_real_eigenvalues(const RealizationConfig& cfg,
                                                           const RealSpectrumOptions& opt,
                                                           double tol = default_series_tol) {
  return find_real_eigenvalues(cfg.ctx, cfg.alpha, characteristic_family(cfg, tol), opt);
}

/// Interval index N with p^{aN} < l < p^{a(N+1)} for l > 0.
inline long interval_of(const PrimeContext& ctx, double alpha, double lambda) {
  return static_cast<long>(std::floor(std::log(lambda) / (alpha * ctx.log_p())));
}

/// Rectangles touching the real axis must keep 0 and every p^{a m} outside.
inline void check_rectangle(const PrimeContext& ctx, double alpha, const Rect& r) {
  if (!(r.re0 < r.re1) || !(r.im0 < r.im1))
    throw validation_error("degenerate search rectangle");
  if (r.im0 > 0 || r.im1 < 0)
    return;
  if (r.re0 <= zero_guard_abs && r.re1 >= -zero_guard_abs)
    throw validation_error("search rectangle contains 0, where the point spectrum accumulates");
  if (r.re1 <= 0)
    return;
  const long lo = interval_of(ctx, alpha, r.re0);
  const long hi = interval_of(ctx, alpha, r.re1);
  const double margin = 2.0 * pole_guard_rel;
  const double top = ctx.pow(alpha * static_cast<double>(lo + 1));
  const double bottom = ctx.pow(alpha * static_cast<double>(lo));
  if (lo != hi || r.re0 <= bottom * (1 + margin) || r.re1 >= top * (1 - margin))
    throw validation_error("search rectangle contains a point p^(alpha m) of the essential spectrum");
}

/// Zeros of det K inside a rectangle by the argument principle.
inline std::vector<EigenvalueRecord> find_complex_eigenvalues(const PrimeContext& ctx, double alpha,
                                                              const CharacteristicFamily& fam, const Rect& rect,
                                                              const ContourOptions& copt = {},
                                                              double null_threshold = 1e-8) {
  check_rectangle(ctx, alpha, rect);
  ContourOptions opt = copt;
  if (!opt.pole_distance) {
    opt.pole_distance = [&ctx, alpha](complex z) {
      if (z.real() <= 0)
        return std::abs(z);
      const double m = std::floor(std::log(z.real()) / (alpha * ctx.log_p()));
      return std::min(std::abs(z - ctx.pow(alpha * m)), std::abs(z - ctx.pow(alpha * (m + 1))));
    };
    opt.pole_order = static_cast<int>(fam.K(rect.center()).rows());
  }
  ContourSearch search(
      [&](complex z) {
        const Matrix k = fam.K(z);
        return std::make_pair(complex(k.determinant()), hadamard_bound(k));
      },
      [&](complex z) {
        const Matrix k = fam.K(z);
        const complex dlog = k.partialPivLu().solve(fam.dK(z)).trace();
        return 1.0 / dlog;
      },
      opt);
  std::vector<EigenvalueRecord> out;
  for (const auto& root : search.find(rect)) {
    EigenvalueRecord rec;
    rec.lambda = root.lambda;
    const double scale = std::max(1.0, std::abs(root.lambda));
    if (std::abs(root.lambda.imag()) <= 1e-10 * scale) {
      if (root.lambda.real() > 0)
        rec.interval = interval_of(ctx, alpha, root.lambda.real());
      else
        rec.negative_axis = true;
    }
    const Eigen::JacobiSVD<Matrix> svd(fam.K(root.lambda));
    const auto& s = svd.singularValues();
    rec.sigma_max = s(0);
    rec.residual = s(s.size() - 1);
    int null_dim = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) <= null_threshold * s(0))
        ++null_dim;
    rec.multiplicity = std::max({1, null_dim, root.winding});
    rec.uncertainty = root.step;
    rec.extension = fam.extension;
    rec.method = "contour";
    out.push_back(rec);
  }
  std::sort(out.begin(), out.end(), [](const EigenvalueRecord& a, const EigenvalueRecord& b) {
    return a.lambda.real() < b.lambda.real() ||
           (a.lambda.real() == b.lambda.real() && a.lambda.imag() < b.lambda.imag());
  });
  return out;
}

inline std::vector<EigenvalueRecord> find_complex_eigenvalues(const RealizationConfig& cfg, const Rect& rect,
                                                              const ContourOptions& copt = {},
                                                              double tol = default_series_tol) {
  return find_complex_eigenvalues(cfg.ctx, cfg.alpha, characteristic_family(cfg, tol), rect, copt);
}

/// Null vector of K(l) (right singular vector of the smallest singular value).
inline Vector null_vector(const Matrix& k) {
  const Eigen::JacobiSVD<Matrix> svd(k, Eigen::ComputeFullV);
  return svd.matrixV().col(k.cols() - 1);
}

struct BoundaryData {
  Vector gamma0;
  Vector gamma1;
};

/// Gamma_0 f = point values at Y, Gamma_1 f = -(c_1..c_n) for
/// f = u + sum_k c_k h_{k,-1}.
inline BoundaryData boundary_data(const RealizationConfig& cfg, const DomainElement& f,
                                  double tol = default_series_tol) {
  const MSeries series(cfg.ctx, cfg.alpha);
  const auto n = static_cast<Eigen::Index>(cfg.size());
  BoundaryData bd{Vector::Zero(n), Vector::Zero(n)};
  for (const auto& g : f.green_parts) {
    if (g.lambda != complex(-1.0, 0.0))
      throw validation_error("domain elements carry Green's components at lambda = -1 only");
    const auto it = std::find(cfg.points.begin(), cfg.points.end(), g.center);
    if (it == cfg.points.end())
      throw validation_error("Green's component centered outside Y");
    bd.gamma1(it - cfg.points.begin()) -= g.weight;
  }
  for (Eigen::Index i = 0; i < n; ++i)
    bd.gamma0(i) = evaluate(series, f.smooth_part, f.green_parts, cfg.points[static_cast<std::size_t>(i)], tol);
  return bd;
}

struct ResolventResult {
  complex lambda;
  /// (D^alpha - l)^{-1} f, coefficientwise.
  WaveletSum diagonal;
  /// -w_k h_{k,l}.
  std::vector<GreenComponent> green;
  /// v_k = (f, h_{k, conj l}).
  Vector v;
  Vector w;
  /// Boundary values of R_l f: Gamma_0 = v - M(l) w, Gamma_1 = w.
  Vector gamma0;
  Vector gamma1;
};

/// (f, h_{k, conj l}) from the coefficients of f: only the coset
/// eps = {p^N x_k} of each scale pairs with the Green's function.
inline complex green_pairing(const WaveletSum& f, const PAdicRational& xk, double alpha, complex lambda) {
  const auto& ctx = f.context();
  CompensatedSum<complex> sum;
  std::map<long, CosetEpsilon> cosets;
  for (const auto& [idx, c] : f) {
    auto it = cosets.find(idx.n);
    if (it == cosets.end())
      it = cosets.emplace(idx.n, coset_rep(idx.n, xk)).first;
    if (idx.eps != it->second)
      continue;
    const PAdicRational arg(ctx, mpq_class(xk.scaled(idx.n - 1).value() * idx.j));
    const complex conj_h = ctx.pow(-0.5 * static_cast<double>(idx.n)) * arg.character() /
                           (dalpha_eigenvalue(ctx, alpha, idx.n) - lambda);
    sum.add(c * conj_h);
  }
  return sum.value();
}

inline ResolventResult resolvent_apply(const RealizationConfig& cfg, complex lambda, const WaveletSum& f,
                                       double tol = default_series_tol) {
  const auto s = solvable(cfg.ctx, cfg.alpha, lambda);
  if (!s.solvable)
    throw guard_violation("resolvent at a point of the essential spectrum: " + s.reason);
  PAdicRational::check_same(PAdicRational(f.context(), 0), PAdicRational(cfg.ctx, 0));
  const MSeries series(cfg.ctx, cfg.alpha);
  const auto n = static_cast<Eigen::Index>(cfg.size());
  ResolventResult r{lambda, apply_shifted(f, cfg.alpha, 0.0), {}, Vector::Zero(n), Vector::Zero(n),
                    Vector::Zero(n), Vector::Zero(n)};
  r.diagonal = f.transformed([&](const WaveletIndex& idx) {
    return 1.0 / (dalpha_eigenvalue(cfg.ctx, cfg.alpha, idx.n) - lambda);
  });
  for (Eigen::Index k = 0; k < n; ++k)
    r.v(k) = green_pairing(f, cfg.points[static_cast<std::size_t>(k)], cfg.alpha, lambda);
  const Matrix m = build_M(series, cfg.points, lambda, tol).value;
  const Matrix k = cfg.B * m + Matrix::Identity(n, n);
  // Relative to the size of BM, so that 1x1 systems are judged too; the
  // series themselves are only good to ~tol.
  const auto [smin, smax] = singular_extremes(k);
  const double scale = 1.0 + singular_extremes(cfg.B).second * singular_extremes(m).second;
  if (!(smin > std::max(1e-10, 10 * tol) * scale))
    throw singular_system("B M(lambda) + I is singular: lambda is an eigenvalue");
  r.w = k.fullPivLu().solve(Vector(cfg.B * r.v));
  for (Eigen::Index i = 0; i < n; ++i)
    if (r.w(i) != complex(0, 0))
      r.green.push_back({cfg.points[static_cast<std::size_t>(i)], lambda, -r.w(i)});
  r.gamma0 = r.v - m * r.w;
  r.gamma1 = r.w;
  return r;
}

/// Windowed (A_B - l) R_l f - f. The output is rewritten as a domain
/// element u + sum_k c_k h_{k,-1} with c = -w, using
/// h_{k,l} - h_{k,-1} = (l + 1)(D^alpha - l)^{-1} h_{k,-1}, and A_B acts as
/// A_B(u + sum c_k h_{k,-1}) = D^alpha u - sum c_k h_{k,-1}.
inline WaveletSum windowed_defect(const RealizationConfig& cfg, const ResolventResult& r, const WaveletSum& f,
                                  long n_lo, long n_hi) {
  const auto& ctx = cfg.ctx;
  const double alpha = cfg.alpha;
  WaveletSum u = r.diagonal.restricted(n_lo, n_hi);
  WaveletSum singular(ctx);
  for (const auto& comp : r.green) {
    const complex c = comp.weight;  // = -w_k
    const WaveletSum h1 = h_coefficients(comp.center, -1.0, alpha, n_lo, n_hi).coefficients;
    u += c * (r.lambda + 1.0) * h1.transformed([&](const WaveletIndex& idx) {
      return 1.0 / (dalpha_eigenvalue(ctx, alpha, idx.n) - r.lambda);
    });
    singular += c * h1;
  }
  const WaveletSum g = u + singular;
  const WaveletSum ag = apply_dalpha(u, alpha) - singular;
  return ag - r.lambda * g - f.restricted(n_lo, n_hi);
}

} // namespace padic_spectra

#endif // PADIC_SPECTRA_OPERATOR_HPP
