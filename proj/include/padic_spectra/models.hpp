#ifndef PADIC_SPECTRA_MODELS_HPP
#define PADIC_SPECTRA_MODELS_HPP

// Worked models: the hard (Friedrichs) two-point condition and its type-1 /
// type-2 split, symmetric and parity-symmetric two-point couplings, and the
// one-point operator A_b = D^alpha + b <delta_0, .> delta_0.
//
// The two-point characteristic functions factor into
//   F1 = (M_0 - M_{p^g}) + a - b,   F2 = (M_0 + M_{p^g}) + a + b,
// each increasing between consecutive poles, so their roots are bracketed
// directly instead of scanning det M.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "padic_spectra/errors.hpp"
#include "padic_spectra/green.hpp"
#include "padic_spectra/mseries.hpp"
#include "padic_spectra/operator.hpp"
#include "padic_spectra/padic.hpp"
#include "padic_spectra/roots.hpp"
#include "padic_spectra/wavelet.hpp"

namespace padic_spectra {

namespace detail {

/// Bisection on [a, b] with f(a) < 0 < f(b).
inline double bisect_increasing(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (a + b);
    if (b - a <= rel_tol * std::abs(mid) || mid <= a || mid >= b)
      break;
    const double fm = f(mid);
    if (fm == 0.0)
      return mid;
    (fm < 0 ? a : b) = mid;
  }
  return 0.5 * (a + b);
}

/// Root of a function increasing on (lo, hi), lo < hi both positive, that
/// may run off to -inf / +inf at the ends. Endpoints are approached
/// geometrically down to the pole guard.
inline std::optional<double> increasing_root(const std::function<double(double)>& f, double lo, double hi,
                                             double rel_tol) {
  const double stop = 2.0 * pole_guard_rel;
  double d = 1e-2;
  double a = lo * (1 + d);
  while (f(a) >= 0) {
    d *= 0.25;
    if (d < stop)
      return std::nullopt;
    a = lo * (1 + d);
  }
  d = 1e-2;
  double b = hi * (1 - d);
  while (f(b) <= 0) {
    d *= 0.25;
    if (d < stop)
      return std::nullopt;
    b = hi * (1 - d);
  }
  if (!(a < b))
    return std::nullopt;
  return bisect_increasing(f, a, b, rel_tol);
}

/// Root on (-inf, 0) of a function increasing in l, in the variable l = -e^t.
inline std::optional<double> increasing_root_negative(const std::function<double(double)>& f,
                                                      const ScanOptions& opt, double rel_tol) {
  const double t_lo = std::max(opt.t_min, std::log(2.0 * zero_guard_abs));
  auto g = [&](double t) { return -f(-std::exp(t)); };  // increasing in t
  if (!(g(t_lo) < 0) || !(g(opt.t_max) > 0))
    return std::nullopt;
  double a = t_lo, b = opt.t_max;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (a + b);
    if (b - a <= rel_tol || mid <= a || mid >= b)
      break;
    (g(mid) < 0 ? a : b) = mid;
  }
  return -std::exp(0.5 * (a + b));
}

} // namespace detail

struct IntervalRoot {
  long interval;
  double lambda;
};

struct ClassifiedSpectrum {
  long gamma = 0;
  long n_lo = 0;
  long n_hi = 0;
  /// Roots of F1 in (p^{aN}, p^{a(N+1)}), N >= 1 - gamma.
  std::vector<IntervalRoot> type1;
  /// Roots of F2 on the pole-free intervals of M_0 + M_{p^g}, tagged by the
  /// interval that actually contains them.
  std::vector<IntervalRoot> type2;
  /// The extra F1 root below p^{a(1-g)} (exists iff b - a > 0).
  std::optional<double> lambda_minus;
  /// The extra negative F2 root (exists iff a + b < 0).
  std::optional<double> lambda_plus;
  std::vector<std::string> notes;

  std::vector<double> in_interval(long n, bool type_one) const {
    std::vector<double> out;
    for (const auto& r : type_one ? type1 : type2)
      if (r.interval == n)
        out.push_back(r.lambda);
    return out;
  }
};

/// F1 and F2 of the symmetric two-point coupling B^{-1} = [[a, b], [b, a]]
/// at points a distance p^gamma apart; a = b = 0 is the hard condition.
inline ClassifiedSpectrum two_point_symmetric_spectrum(const PrimeContext& ctx, double alpha, long gamma, double a,
                                                       double b, long n_lo, long n_hi,
                                                       double tol = default_series_tol,
                                                       double root_rel_tol = 1e-13) {
  if (n_lo > n_hi)
    throw validation_error("empty interval window");
  const MSeries m(ctx, alpha);
  ClassifiedSpectrum out;
  out.gamma = gamma;
  out.n_lo = n_lo;
  out.n_hi = n_hi;
  auto f1 = [&](double l) { return m.diff(gamma, l, tol).real() + a - b; };
  auto f2 = [&](double l) { return m.sum(gamma, l, tol).real() + a + b; };

  for (long n = std::max(n_lo, 1 - gamma); n <= n_hi; ++n)
    if (auto r = detail::increasing_root(f1, m.pole(n), m.pole(n + 1), root_rel_tol))
      out.type1.push_back({n, *r});

  // For p = 2 the sum has no pole at p^{a(1-g)}; the two intervals around it
  // form one branch with a single root.
  const bool merged = ctx.prime() == 2;
  for (long n = n_lo; n <= n_hi; ++n) {
    double lo = m.pole(n), hi = m.pole(n + 1);
    if (merged && n == -gamma) {
      hi = m.pole(n + 2);
    } else if (merged && n == 1 - gamma) {
      if (n_lo <= -gamma)
        continue;  // already covered
      lo = m.pole(n - 1);
    }
    if (auto r = detail::increasing_root(f2, lo, hi, root_rel_tol)) {
      const long tag = interval_of(ctx, alpha, *r);
      if (tag >= n_lo && tag <= n_hi)
        out.type2.push_back({tag, *r});
    }
  }
  std::sort(out.type2.begin(), out.type2.end(), [](const IntervalRoot& x, const IntervalRoot& y) {
    return x.lambda < y.lambda;
  });
  if (merged) {
    std::ostringstream os;
    os << "p = 2: M_0 + M_{p^g} is regular at p^(alpha*" << 1 - gamma << "), so intervals " << -gamma << " and "
       << 1 - gamma << " share one type-2 root";
    out.notes.push_back(os.str());
  }

  ScanOptions scan;
  if (b - a > 0) {
    // F1 runs from a - b (at -inf) up to +inf at p^{a(1-g)}.
    const double at_zero = m.diff(gamma, 0.0, tol).real();
    const double gap = b - a;
    bool exceptional = false;
    for (long k = n_lo; k <= -gamma; ++k) {
      const double v = m.diff(gamma, m.pole(k), tol).real();
      if (std::abs(v - gap) <= 1e-10 * std::max(1.0, v)) {
        std::ostringstream os;
        os << "b - a equals (M_0 - M_{p^g})(p^(alpha*" << k << ")): the extra point is p^(alpha*" << k
           << ") itself, which is not a discrete eigenvalue";
        out.notes.push_back(os.str());
        exceptional = true;
      }
    }
    {
      std::ostringstream os;
      os << "exceptional values at p^(alpha*m), m < " << n_lo << ", not checked";
      out.notes.push_back(os.str());
    }
    if (!exceptional) {
      if (std::abs(gap - at_zero) <= 1e-12 * at_zero) {
        out.notes.push_back("b - a equals (M_0 - M_{p^g})(0): the extra point sits at 0");
      } else if (gap < at_zero) {
        out.lambda_minus = detail::increasing_root_negative(f1, scan, 1e-15);
        if (!out.lambda_minus)
          out.notes.push_back("extra type-1 point lies outside the negative-axis scan range");
      } else {
        // Positive and below p^{a(1-g)}; F1 is continuous on [0, p^{a(1-g)}).
        const double top = m.pole(1 - gamma);
        double hi = top * (1 - 1e-2);
        for (double d = 1e-2; f1(hi) <= 0 && d > 2 * pole_guard_rel; d *= 0.25)
          hi = top * (1 - d);
        if (f1(hi) > 0)
          out.lambda_minus = detail::bisect_increasing(f1, 0.0, hi, root_rel_tol);
      }
    }
  }
  if (a + b < 0) {
    out.lambda_plus = detail::increasing_root_negative(f2, scan, 1e-15);
    if (!out.lambda_plus)
      out.notes.push_back("extra type-2 point lies outside the negative-axis scan range");
  }
  return out;
}

/// Hard condition f(x_1) = f(x_2) = 0 at two points a distance p^gamma apart.
inline ClassifiedSpectrum friedrichs_spectrum(const PrimeContext& ctx, double alpha, long gamma, long n_lo,
                                              long n_hi, double tol = default_series_tol) {
  return two_point_symmetric_spectrum(ctx, alpha, gamma, 0.0, 0.0, n_lo, n_hi, tol);
}

inline ClassifiedSpectrum friedrichs_spectrum(const std::vector<PAdicRational>& points, double alpha, long n_lo,
                                              long n_hi, double tol = default_series_tol) {
  if (points.size() != 2)
    throw validation_error("the classified hard-condition spectrum needs exactly two points");
  const auto& ctx = points[0].context();
  const auto g = distance_exponent(points[0], points[1]);
  if (!g)
    throw validation_error("points must be distinct");
  return friedrichs_spectrum(ctx, alpha, *g, n_lo, n_hi, tol);
}

/// gamma_min = 1 - (first interval carrying a type-1 root).
inline long recover_gamma_min(const ClassifiedSpectrum& spec) {
  if (spec.type1.empty())
    throw validation_error("no type-1 roots in the window");
  long first = spec.type1.front().interval;
  for (const auto& r : spec.type1)
    first = std::min(first, r.interval);
  if (first == spec.n_lo)
    throw validation_error("type-1 onset is at the window's lower edge; widen the window");
  return 1 - first;
}

/// A root of det M for n points, with its null-vector shape.
struct HardRoot {
  EigenvalueRecord record;
  /// Null vector proportional to e_i - e_j: a root of M_0 - M_{|x_i - x_j|}.
  std::optional<std::pair<std::size_t, std::size_t>> antisymmetric_pair;
};

inline std::vector<HardRoot> friedrichs_roots(const PrimeContext& ctx, double alpha,
                                              const std::vector<PAdicRational>& points,
                                              const RealSpectrumOptions& opt, double tol = default_series_tol) {
  const auto fam = friedrichs_family(ctx, alpha, points, tol);
  std::vector<HardRoot> out;
  const auto n = static_cast<Eigen::Index>(points.size());
  for (const auto& rec : find_real_eigenvalues(ctx, alpha, fam, opt)) {
    HardRoot h{rec, std::nullopt};
    const Matrix k = fam.K(rec.lambda);
    const double smax = singular_extremes(k).second;
    for (Eigen::Index i = 0; i < n && !h.antisymmetric_pair; ++i)
      for (Eigen::Index j = i + 1; j < n && !h.antisymmetric_pair; ++j) {
        Vector e = Vector::Zero(n);
        e(i) = 1;
        e(j) = -1;
        if ((k * e).norm() <= 1e-7 * smax)
          h.antisymmetric_pair = std::make_pair(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      }
    out.push_back(h);
  }
  return out;
}

/// gamma_min from n-point hard roots: each antisymmetric pair (i, j) carries
/// its own series starting at N = 1 - gamma_ij; the closest pairs start last.
inline long recover_gamma_min(const std::vector<HardRoot>& roots, long n_lo) {
  std::map<std::pair<std::size_t, std::size_t>, long> onset;
  for (const auto& r : roots) {
    if (!r.antisymmetric_pair || !r.record.interval)
      continue;
    auto [it, inserted] = onset.emplace(*r.antisymmetric_pair, *r.record.interval);
    if (!inserted)
      it->second = std::min(it->second, *r.record.interval);
  }
  if (onset.empty())
    throw validation_error("no antisymmetric (type-1) roots in the window");
  long last = std::numeric_limits<long>::min();
  for (const auto& [pair, n] : onset) {
    if (n == n_lo)
      throw validation_error("type-1 onset is at the window's lower edge; widen the window");
    last = std::max(last, n);
  }
  return 1 - last;
}

struct HardFactorization {
  /// The closest pair, moved to positions 0 and 1.
  std::size_t first, second;
  long gamma_min;
  complex det_m;
  /// M_0 - M_{p^{gamma_min}} from its own series.
  complex factor;
  /// Determinant after replacing row 0 by (row 0 - row 1) / factor.
  complex cofactor;
  /// max |(row 0 - row 1) - factor (1, -1, 0, ...)|.
  double row_residual;
};

/// det M(l) = (M_0 - M_{p^{gamma_min}})(l) * det[(1, -1, 0, ...); rows 2..n].
inline HardFactorization friedrichs_factorization(const PrimeContext& ctx, double alpha,
                                                  std::vector<PAdicRational> points, complex lambda,
                                                  double tol = default_series_tol) {
  if (points.size() < 2)
    throw validation_error("need at least two points");
  const MSeries series(ctx, alpha);
  HardFactorization hf{};
  long best = std::numeric_limits<long>::max();
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const auto d = distance_exponent(points[i], points[j]);
      if (!d)
        throw validation_error("points must be distinct");
      const long g = *d;
      if (g < best) {
        best = g;
        hf.first = i;
        hf.second = j;
      }
    }
  hf.gamma_min = best;
  std::vector<PAdicRational> ordered{points[hf.first], points[hf.second]};
  for (std::size_t i = 0; i < points.size(); ++i)
    if (i != hf.first && i != hf.second)
      ordered.push_back(points[i]);
  points = std::move(ordered);
  const Matrix m = build_M(series, points, lambda, tol).value;
  hf.det_m = m.determinant();
  hf.factor = series.diff(best, lambda, tol).value;
  Vector expect = Vector::Zero(m.cols());
  expect(0) = hf.factor;
  expect(1) = -hf.factor;
  hf.row_residual = (m.row(0) - m.row(1) - expect.transpose()).cwiseAbs().maxCoeff();
  Matrix reduced = m;
  reduced.row(0) = Vector::Zero(m.cols()).transpose();
  reduced(0, 0) = 1;
  reduced(0, 1) = -1;
  hf.cofactor = reduced.determinant();
  return hf;
}

/// Real roots of (M_0 - M_{p^g})(M_0 + M_{p^g}) + a^2 + b^2, the parity
/// coupling B^{-1} = [[-ia, b], [-b, ia]] at x_2 = -x_1.
struct ParityTwoPoint {
  std::vector<EigenvalueRecord> roots;
  /// Roots found on (-inf, 0) (expected none).
  std::size_t negative = 0;
  /// N < -g: p^{aN} < l_N < l_N^+ for every root; N >= 1 - g: every root in
  /// (l_N^+, l_N^-).
  bool brackets_hold = true;
  std::vector<std::string> violations;
};

inline ParityTwoPoint pt_two_point_real_eigenvalues(const PrimeContext& ctx, double alpha, long gamma, double a,
                                                    double b, long n_lo, long n_hi,
                                                    double tol = default_series_tol, ScanOptions scan = {}) {
  const MSeries m(ctx, alpha);
  const double shift = a * a + b * b;
  CharacteristicFamily fam;
  // Scalar family: K(l) = [F(l)], real on the axis by construction.
  fam.K = [m, gamma, shift, tol](complex l) {
    Matrix k(1, 1);
    k(0, 0) = m.diff(gamma, l, tol).value * m.sum(gamma, l, tol).value + shift;
    return k;
  };
  fam.dK = [m, gamma, tol](complex l) {
    Matrix k(1, 1);
    const complex d = m.diff(gamma, l, tol).value, s = m.sum(gamma, l, tol).value;
    const complex dd = m.m0_prime(l, tol).value - m.m_gamma_prime(gamma, l, tol).value;
    const complex ds = m.m0_prime(l, tol).value + m.m_gamma_prime(gamma, l, tol).value;
    k(0, 0) = dd * s + d * ds;
    return k;
  };
  RealSpectrumOptions opt{n_lo, n_hi, true, scan};
  ParityTwoPoint out;
  // A scalar K has sigma_min / sigma_max = 1: touching zeros are judged by
  // |F| against the size of its two terms instead.
  opt.scan.null_threshold = 0.0;
  out.roots = find_real_eigenvalues(ctx, alpha, fam, opt);
  const auto hard = friedrichs_spectrum(ctx, alpha, gamma, n_lo, n_hi, tol);
  for (const auto& r : out.roots) {
    const double l = r.lambda.real();
    if (!r.interval) {
      ++out.negative;
      out.brackets_hold = false;
      out.violations.push_back("root on the negative axis");
      continue;
    }
    const long n = *r.interval;
    const auto plus = hard.in_interval(n, false);
    const auto minus = hard.in_interval(n, true);
    std::ostringstream os;
    if (n < -gamma) {
      if (plus.size() != 1 || !(l > m.pole(n) && l < plus[0])) {
        os << "N=" << n << ": root " << l << " not in (p^(alpha N), l_N^+)";
        out.violations.push_back(os.str());
        out.brackets_hold = false;
      }
    } else if (n >= 1 - gamma) {
      if (plus.size() != 1 || minus.size() != 1 || !(l > plus[0] && l < minus[0])) {
        os << "N=" << n << ": root " << l << " not in (l_N^+, l_N^-)";
        out.violations.push_back(os.str());
        out.brackets_hold = false;
      }
    }
  }
  return out;
}

/// Real roots in interval n as (a, b) is scaled down. No threshold formula is
/// known; onset is the first scale, in the order given, with a root.
struct CouplingSweep {
  long interval = 0;
  std::vector<std::pair<double, std::size_t>> counts;
  std::optional<double> onset;
};

inline CouplingSweep pt_coupling_sweep(const PrimeContext& ctx, double alpha, long gamma, double a, double b, long n,
                                       const std::vector<double>& scales = {1.0, 1e-1, 1e-2, 1e-3},
                                       double tol = default_series_tol) {
  CouplingSweep out;
  out.interval = n;
  for (double s : scales) {
    if (!(s > 0))
      throw validation_error("sweep scales must be positive");
    const auto r = pt_two_point_real_eigenvalues(ctx, alpha, gamma, s * a, s * b, n, n, tol);
    out.counts.emplace_back(s, r.roots.size());
    if (!out.onset && !r.roots.empty())
      out.onset = s;
  }
  return out;
}

// ---------------------------------------------------------------------------
// One point, x_1 = 0.

inline bool is_hard(double b) { return std::isinf(b); }

struct OnePointEigenvalue {
  /// Interval N, or empty for the negative eigenvalue.
  std::optional<long> interval;
  double lambda;
};

/// Roots of M_0(l) = -1/b per interval (M_0 = 0 for b = infinity) and the
/// negative root for b < 0. b = 0 is D^alpha itself: no discrete spectrum.
inline std::vector<OnePointEigenvalue> one_point_eigenvalues(const PrimeContext& ctx, double alpha, double b,
                                                             long n_lo, long n_hi,
                                                             double tol = default_series_tol,
                                                             double root_rel_tol = 1e-13) {
  if (std::isnan(b))
    throw validation_error("coupling b is NaN");
  std::vector<OnePointEigenvalue> out;
  if (b == 0.0)
    return out;
  const MSeries m(ctx, alpha);
  const double target = is_hard(b) ? 0.0 : -1.0 / b;
  auto f = [&](double l) { return m.m0(l, tol).real() - target; };
  if (b < 0) {
    if (auto r = detail::increasing_root_negative(f, ScanOptions{}, 1e-15))
      out.push_back({std::nullopt, *r});
  }
  for (long n = n_lo; n <= n_hi; ++n)
    if (auto r = detail::increasing_root(f, m.pole(n), m.pole(n + 1), root_rel_tol))
      out.push_back({n, *r});
  return out;
}

struct OnePointEigenfunction {
  double lambda;
  /// M_0'(l)^{-1/2} h_{0,l} on the window.
  WaveletSum coefficients;
  double m0_prime;
  /// Upper bound on the squared L2 norm left outside the window.
  double tail_norm_sq;
};

inline OnePointEigenfunction one_point_eigenfunction(const PrimeContext& ctx, double alpha, double lambda,
                                                     long n_lo, long n_hi, double tol = default_series_tol) {
  const MSeries m(ctx, alpha);
  const double d = m.m0_prime(lambda, tol).real();
  const auto g = h_coefficients(PAdicRational(ctx, 0), lambda, alpha, n_lo, n_hi);
  const double s = 1.0 / std::sqrt(d);
  return {lambda, complex(s) * g.coefficients, d, g.tail.norm_sq / d};
}

/// psi~_{N j 0}, j = 1..p-2: with psi_{N j eps}, eps != 0, an orthonormal
/// basis of ker(A_b - p^{a(1-N)}) for every b.
inline std::vector<WaveletSum> one_point_kernel_basis(const PrimeContext& ctx, long n) {
  if (ctx.prime() == 2)
    throw validation_error("p = 2 has no modified wavelets (p - 2 = 0)");
  std::vector<WaveletSum> out;
  for (unsigned long j = 1; j + 2 <= ctx.prime(); ++j)
    out.push_back(modified_wavelet(ctx, n, j));
  return out;
}

/// xi_b(l) = (1/pi) arg[1 + b M_0(l + i0)] for real l off the jump set.
/// Im M_0(l + i0) > 0, so the argument is +pi for b > 0 and -pi for b < 0
/// wherever 1 + b M_0(l) < 0.
inline int spectral_shift(const PrimeContext& ctx, double alpha, double b, double lambda,
                          double tol = default_series_tol) {
  if (b == 0.0 || !std::isfinite(b))
    throw validation_error("spectral shift needs a finite nonzero b");
  const MSeries m(ctx, alpha);
  const double bm = b * m.m0(lambda, tol).real();
  const double v = 1.0 + bm;
  if (std::abs(v) <= 1e-10 * (1.0 + std::abs(bm))) {
    std::ostringstream os;
    os << "lambda = " << lambda << " is an eigenvalue of A_b, where xi_b jumps";
    throw guard_violation(os.str());
  }
  if (v > 0)
    return 0;
  return b > 0 ? 1 : -1;
}

struct HomogeneityReport {
  double b;
  long n;
  /// The eigenbasis is carried into itself by U.
  bool homogeneous = false;
  /// b = 0: every psi_{Nj eps} sampled maps to one basis vector.
  /// b = infinity: relative defect of l_{N+1} = p^alpha l_N, and the
  /// distance between U phi_N and phi_{N-1} on a window against its bound.
  /// finite b: M_0(p^{-alpha} l_{N,b}), p^{alpha-1}(-1/b) and -1/b.
  std::vector<std::pair<std::string, double>> values;
  std::string verdict;
};

inline HomogeneityReport homogeneity_check(const PrimeContext& ctx, double alpha, double b, long n,
                                           double tol = default_series_tol) {
  HomogeneityReport rep{b, n};
  const MSeries m(ctx, alpha);
  if (b == 0.0) {
    // U psi_{N j eps} = psi_{(N+1) j eps} for a spread of cosets.
    bool ok = true;
    for (unsigned long j = 1; j < ctx.prime(); ++j)
      for (long e = 0; e < 4; ++e) {
        WaveletSum w(ctx);
        const WaveletIndex idx{n, j, coset_rep(n, PAdicRational(ctx, e, static_cast<long>(ctx.prime())))};
        w.add(idx, 1.0);
        const WaveletSum u = dilate(w);
        const WaveletIndex target{n + 1, j, idx.eps};
        ok = ok && u.size() == 1 && u.coefficient(target) == complex(1.0, 0.0);
      }
    rep.homogeneous = ok;
    rep.values.push_back({"basis_mapped", ok ? 1.0 : 0.0});
    rep.verdict = ok ? "wavelet basis is dilation invariant" : "dilation leaves the wavelet basis";
    return rep;
  }
  if (is_hard(b)) {
    const auto roots = one_point_eigenvalues(ctx, alpha, b, n - 1, n + 1, tol);
    if (roots.size() != 3)
      throw numerical_failure("hard one-point roots missing in the checked intervals");
    const double rel_up = std::abs(roots[2].lambda - ctx.pow(alpha) * roots[1].lambda) / roots[2].lambda;
    const double rel_down = std::abs(roots[1].lambda - ctx.pow(alpha) * roots[0].lambda) / roots[1].lambda;
    rep.values.push_back({"recurrence_rel_defect", std::max(rel_up, rel_down)});
    const long lo = n - 20, hi = n + 20;
    const auto phi = one_point_eigenfunction(ctx, alpha, roots[1].lambda, lo, hi, tol);
    const auto below = one_point_eigenfunction(ctx, alpha, roots[0].lambda, lo + 1, hi + 1, tol);
    const double dist = std::sqrt((dilate(phi.coefficients) - below.coefficients).norm_sq());
    // The windows line up under U, so only root and normalization errors remain.
    const double bound = 1e-9;
    rep.values.push_back({"dilated_eigenfunction_distance", dist});
    rep.values.push_back({"dilated_eigenfunction_bound", bound});
    rep.homogeneous = std::max(rel_up, rel_down) <= 1e-9 && dist <= bound;
    rep.verdict = rep.homogeneous ? "eigenbasis is dilation invariant" : "dilation check failed";
    return rep;
  }
  const auto roots = one_point_eigenvalues(ctx, alpha, b, n, n, tol);
  if (roots.empty() || !roots.back().interval)
    throw numerical_failure("no positive root in the checked interval");
  const double l = roots.back().lambda;
  const double mu = l / ctx.pow(alpha);
  const auto at_mu = m.m0(mu, tol);
  const double predicted = ctx.pow(alpha - 1.0) * (-1.0 / b);
  rep.values.push_back({"lambda_N_b", l});
  rep.values.push_back({"M0_at_mu", at_mu.real()});
  rep.values.push_back({"M0_at_mu_bound", at_mu.error_bound});
  rep.values.push_back({"p^(alpha-1)*(-1/b)", predicted});
  rep.values.push_back({"-1/b", -1.0 / b});
  const bool certificate = std::abs(at_mu.real() - predicted) <= at_mu.error_bound + 1e-9 * std::abs(predicted) &&
                           std::abs(at_mu.real() + 1.0 / b) > at_mu.error_bound;
  rep.homogeneous = false;
  rep.verdict = certificate ? "not homogeneous: p^(-alpha) lambda_{N,b} is not an eigenvalue"
                            : "certificate could not be established";
  return rep;
}

} // namespace padic_spectra

#endif // PADIC_SPECTRA_MODELS_HPP
