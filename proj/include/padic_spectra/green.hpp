#ifndef PADIC_SPECTRA_GREEN_HPP
#define PADIC_SPECTRA_GREEN_HPP

// Green's function h_{k,l} solving (D^alpha - l) h = delta_{x_k}. In the
// wavelet basis
//
//   h_{k,l} = sum_N sum_j p^{-N/2} chi(-p^{N-1} j x_k) [p^{a(1-N)} - l]^{-1} psi_{N j {p^N x_k}},
//
// and for alpha > 1 it is radial around x_k: M_0(l) at x_k and M_{p^g}(l) on
// the sphere |x - x_k|_p = p^g, with ||h||^2 = M_0'(l).

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "padic_spectra/mseries.hpp"
#include "padic_spectra/wavelet.hpp"

namespace padic_spectra {

struct Solvability {
  bool solvable = false;
  /// The radial closed form (alpha > 1) is available.
  bool radial = false;
  std::string reason;
};

/// Whether (D^alpha - l) h = delta has an L2 solution.
inline Solvability solvable(const PrimeContext& ctx, double alpha, complex lambda) {
  if (!(alpha > 0.5))
    return {false, false, "alpha <= 1/2"};
  if (std::abs(lambda) <= zero_guard_abs)
    return {false, false, "lambda = 0 (the point p^(alpha*m), m = -inf)"};
  const double mr = std::log(std::abs(lambda)) / (alpha * ctx.log_p());
  for (double cand : {std::floor(mr), std::ceil(mr)}) {
    const double pm = ctx.pow(alpha * cand);
    if (std::abs(lambda - pm) <= pole_guard_rel * pm)
      return {false, false, "lambda = p^(alpha*" + std::to_string(static_cast<long>(cand)) + ")"};
  }
  return {true, alpha > 1.0, alpha > 1.0 ? "" : "radial formula needs alpha > 1"};
}

/// h_{k,l}(x): M_0(l) at x = x_k, M_{p^g}(l) when |x - x_k|_p = p^g.
inline MEvaluation eval_h(const MSeries& series, const PAdicRational& xk, complex lambda,
                          const PAdicRational& x, double tol = default_series_tol) {
  const auto gamma = distance_exponent(x, xk);
  return gamma ? series.m_gamma(*gamma, lambda, tol) : series.m0(lambda, tol);
}

/// ||h_{k,l}||^2, independent of the center: M_0'(l) for real l. Off the
/// axis the squares do not match |.|^2 and the resolvent identity gives
/// Im M_0(l) / Im l instead.
inline MEvaluation h_norm_sq(const MSeries& series, complex lambda, double tol = default_series_tol) {
  if (lambda.imag() == 0.0)
    return series.m0_prime(lambda, tol);
  const MEvaluation m = series.m0(lambda, tol);
  const double im = std::abs(lambda.imag());
  return {complex(m.value.imag() / lambda.imag(), 0.0), m.error_bound / im, m.terms_used};
}

/// Bounds on what a scale window [n_min, n_max] leaves out of h_{k,l}.
struct GreenTail {
  /// Upper bound on ||h - h_window||^2.
  double norm_sq = 0.0;
  /// Upper bound on sup_x |h(x) - h_window(x)|; infinite for alpha <= 1.
  double pointwise = 0.0;
};

/// Rigorous tail bounds for the window [n_min, n_max]. Scales between the
/// window and the geometric regime are summed explicitly.
inline GreenTail green_tail(const PrimeContext& ctx, double alpha, complex lambda, long n_min, long n_max) {
  const double p = ctx.p();
  const double abs_l = std::abs(lambda);
  GreenTail t;
  auto add_term = [&](long n) {
    const double mag = std::abs(dalpha_eigenvalue(ctx, alpha, n) - lambda);
    const double w = (p - 1.0) * ctx.pow(-static_cast<double>(n));
    t.norm_sq += w / (mag * mag);
    t.pointwise += w / mag;
  };
  // Coarse side (N > n_max): eigenvalue -> 0; geometric once it is <= |l|/2.
  long n = n_max + 1;
  while (dalpha_eigenvalue(ctx, alpha, n) > abs_l / 2.0)
    add_term(n++);
  t.norm_sq += 4.0 * ctx.pow(1.0 - static_cast<double>(n)) / (abs_l * abs_l);
  t.pointwise += 2.0 * ctx.pow(1.0 - static_cast<double>(n)) / abs_l;
  // Fine side (N < n_min): eigenvalue -> inf; geometric once it is >= 2|l|.
  n = n_min - 1;
  while (dalpha_eigenvalue(ctx, alpha, n) < 2.0 * abs_l)
    add_term(n--);
  const double nd = static_cast<double>(n);
  t.norm_sq += 4.0 * (p - 1.0) * std::pow(p, -2.0 * alpha) * std::pow(p, nd * (2.0 * alpha - 1.0)) /
               (1.0 - std::pow(p, -(2.0 * alpha - 1.0)));
  if (alpha > 1.0)
    t.pointwise += 2.0 * (p - 1.0) * std::pow(p, -alpha) * std::pow(p, nd * (alpha - 1.0)) /
                   (1.0 - std::pow(p, -(alpha - 1.0)));
  else
    t.pointwise = std::numeric_limits<double>::infinity();
  t.norm_sq *= 1.0 + 8.0 * machine_eps;
  t.pointwise *= 1.0 + 8.0 * machine_eps;
  return t;
}

struct GreenExpansion {
  WaveletSum coefficients;
  GreenTail tail;
};

/// Windowed wavelet coefficients of h_{k,l}. Needs alpha > 1/2 only.
inline GreenExpansion h_coefficients(const PAdicRational& xk, complex lambda, double alpha, long n_min,
                                     long n_max) {
  const auto& ctx = xk.context();
  const auto s = solvable(ctx, alpha, lambda);
  if (!s.solvable)
    throw guard_violation("no L2 Green's function: " + s.reason);
  if (n_min > n_max)
    throw validation_error("empty scale window");
  WaveletSum delta = delta_coefficients(xk, n_min, n_max);
  WaveletSum h = delta.transformed([&](const WaveletIndex& idx) {
    return 1.0 / (dalpha_eigenvalue(ctx, alpha, idx.n) - lambda);
  });
  return {std::move(h), green_tail(ctx, alpha, lambda, n_min, n_max)};
}

/// Smallest window, grown symmetrically from the scale whose eigenvalue is
/// nearest |l|, whose L2 tail is at most tol.
inline std::pair<long, long> default_window(const PrimeContext& ctx, double alpha, complex lambda,
                                            double tol) {
  const double abs_l = std::max(std::abs(lambda), 1e-300);
  const long center = 1 - static_cast<long>(std::lround(std::log(abs_l) / (alpha * ctx.log_p())));
  long lo = center, hi = center;
  while (std::sqrt(green_tail(ctx, alpha, lambda, lo, hi).norm_sq) > tol) {
    --lo;
    ++hi;
    if (hi - lo > 100000)
      throw numerical_failure("no window reaches the requested Green's function tolerance");
  }
  return {lo, hi};
}

/// sum_{j=1}^{p-1} chi(p^{g-1} j (x - x_k)) with |x - x_k|_p = p^g; equals -1.
inline complex character_sphere_sum(const PAdicRational& x, const PAdicRational& xk) {
  const auto gamma = distance_exponent(x, xk);
  if (!gamma)
    throw validation_error("character sphere sum needs x != x_k");
  const auto& ctx = x.context();
  const PAdicRational y = (x - xk).scaled(*gamma - 1);
  CompensatedSum<complex> sum;
  for (unsigned long j = 1; j < ctx.prime(); ++j)
    sum.add(PAdicRational(ctx, mpq_class(y.value() * j)).character());
  const complex s = sum.value();
  if (std::abs(s + 1.0) > 1e-9)
    throw numerical_failure("character sum over a sphere did not evaluate to -1");
  return s;
}

/// weight * h_{k,l} centered at one of the interaction points.
struct GreenComponent {
  PAdicRational center;
  complex lambda;
  complex weight;
};

/// f = u + sum_k c_k h_{k,-1}: u a finite wavelet sum standing in for an
/// element of D(D^alpha), the c_k carried by Green's components at l = -1.
struct DomainElement {
  WaveletSum smooth_part;
  std::vector<GreenComponent> green_parts;
};

/// Pointwise value: wavelet part plus radial evaluation of each component.
inline complex evaluate(const MSeries& series, const WaveletSum& smooth,
                        const std::vector<GreenComponent>& green, const PAdicRational& x,
                        double tol = default_series_tol) {
  CompensatedSum<complex> sum;
  sum.add(evaluate(smooth, x));
  for (const auto& g : green)
    sum.add(g.weight * eval_h(series, g.center, g.lambda, x, tol).value);
  return sum.value();
}

} // namespace padic_spectra

#endif // PADIC_SPECTRA_GREEN_HPP
