#ifndef PADIC_SPECTRA_MSERIES_HPP
#define PADIC_SPECTRA_MSERIES_HPP

// The M-series that govern the discrete spectrum:
//
//   M_0(l)     = ((p-1)/p) sum_{N in Z}      p^N / (p^{aN} - l)
//   M_{p^g}(l) = ((p-1)/p) sum_{N <= -g}     p^N / (p^{aN} - l) - p^{-g} / (p^{a(1-g)} - l)
//   M_0'(l)    = ((p-1)/p) sum_{N in Z}      p^N / (p^{aN} - l)^2
//   M_0 - M_{p^g} = ((p-1)/p) sum_{N >= 2-g} p^N / (p^{aN} - l) + p^{1-g} / (p^{a(1-g)} - l)
//
// Every evaluation carries a rigorous bound on |value - exact sum|: the two
// geometric tail estimates plus a first-order bound on floating rounding.

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include "padic_spectra/errors.hpp"
#include "padic_spectra/numeric.hpp"
#include "padic_spectra/padic.hpp"

namespace padic_spectra {

inline constexpr double default_series_tol = 1e-12;
/// Relative distance to a pole p^{alpha m} below which evaluation refuses.
inline constexpr double pole_guard_rel = 1e-9;
/// Absolute distance to 0 below which two-sided series refuse.
inline constexpr double zero_guard_abs = 1e-12;

struct MEvaluation {
  complex value;
  double error_bound = 0.0;
  long terms_used = 0;

  double real() const noexcept { return value.real(); }
};

inline MEvaluation operator+(const MEvaluation& a, const MEvaluation& b) {
  return {a.value + b.value, a.error_bound + b.error_bound, a.terms_used + b.terms_used};
}
inline MEvaluation operator-(const MEvaluation& a, const MEvaluation& b) {
  return {a.value - b.value, a.error_bound + b.error_bound, a.terms_used + b.terms_used};
}

/// Evaluator of the M-series family for a fixed prime and exponent alpha > 1.
class MSeries {
public:
  MSeries(const PrimeContext& ctx, double alpha) : ctx_(ctx), alpha_(alpha) {
    if (!(alpha > 1.0) || !std::isfinite(alpha))
      throw validation_error("M-series need alpha > 1");
  }

  const PrimeContext& context() const noexcept { return ctx_; }
  double alpha() const noexcept { return alpha_; }

  /// The pole p^{alpha m}.
  double pole(long m) const { return ctx_.pow(alpha_ * static_cast<double>(m)); }

  /// Real number m with p^{alpha m} = |lambda|.
  double pole_coordinate(complex lambda) const {
    return std::log(std::abs(lambda)) / (alpha_ * ctx_.log_p());
  }

  /// Index of the pole nearest to lambda in relative distance if that
  /// distance is within the guard, restricted to m in [lo, hi].
  std::optional<long> guarded_pole(complex lambda, long lo, long hi) const {
    if (std::abs(lambda) == 0.0)
      return std::nullopt;
    const double mr = pole_coordinate(lambda);
    for (double cand : {std::floor(mr), std::ceil(mr)}) {
      if (cand < static_cast<double>(lo) || cand > static_cast<double>(hi))
        continue;
      const long m = static_cast<long>(cand);
      const double pm = pole(m);
      if (std::abs(lambda - pm) <= pole_guard_rel * pm)
        return m;
    }
    return std::nullopt;
  }

  MEvaluation m0(complex lambda, double tol = default_series_tol) const {
    check_zero(lambda);
    check_poles(lambda, min_index, max_index);
    return scaled_sum(lambda, 1, std::nullopt, std::nullopt, tol);
  }

  MEvaluation m0_prime(complex lambda, double tol = default_series_tol) const {
    check_zero(lambda);
    check_poles(lambda, min_index, max_index);
    return scaled_sum(lambda, 2, std::nullopt, std::nullopt, tol);
  }

  MEvaluation m_gamma(long gamma, complex lambda, double tol = default_series_tol) const {
    check_zero(lambda);
    check_poles(lambda, min_index, 1 - gamma);
    MEvaluation s = scaled_sum(lambda, 1, std::nullopt, -gamma, tol);
    return s - single_term(-static_cast<double>(gamma), 1 - gamma, lambda, 1);
  }

  MEvaluation m_gamma_prime(long gamma, complex lambda, double tol = default_series_tol) const {
    check_zero(lambda);
    check_poles(lambda, min_index, 1 - gamma);
    MEvaluation s = scaled_sum(lambda, 2, std::nullopt, -gamma, tol);
    return s - single_term(-static_cast<double>(gamma), 1 - gamma, lambda, 2);
  }

  /// M_{p^g} through the telescoped positive form
  /// sum_{N <= -g} p^N (p^{a(N+1)} - p^{aN}) / ((p^{aN} - l)(p^{a(N+1)} - l)).
  MEvaluation m_gamma_telescoped(long gamma, complex lambda, double tol = default_series_tol) const {
    check_zero(lambda);
    check_poles(lambda, min_index, 1 - gamma);
    const double p = ctx_.p();
    const double abs_l = std::abs(lambda);
    const long hi = -gamma;
    // Lower tail: for N < L, p^{a(N+1)} <= |l|/2 and
    // |term| <= 4 p^a p^{N(1+a)} / |l|^2, summing to
    // 4 p^a r^L / ((r - 1)|l|^2) with r = p^{1+a}.
    const double r_log = (1.0 + alpha_) * ctx_.log_p();
    long lo = static_cast<long>(std::floor(std::log(abs_l / 2.0) / (alpha_ * ctx_.log_p()))) - 1;
    const double log_target =
        std::log(tol * (std::exp(r_log) - 1.0) / (4.0 * std::pow(p, alpha_))) + 2.0 * std::log(abs_l);
    lo = std::min(lo, static_cast<long>(std::floor(log_target / r_log)));
    lo = std::min(lo, hi + 1);
    const double tail = 4.0 * std::pow(p, alpha_) * std::exp(r_log * static_cast<double>(lo)) /
                        ((std::exp(r_log) - 1.0) * abs_l * abs_l);
    CompensatedSum<complex> acc;
    double rounding = 0.0;
    long terms = 0;
    for (long n = lo; n <= hi; ++n) {
      const double a = pole(n), b = pole(n + 1);
      const complex da = a - lambda, db = b - lambda;
      const complex term = ctx_.pow(static_cast<double>(n)) * (b - a) / (da * db);
      acc.add(term);
      rounding += std::abs(term) * machine_eps *
                  (8.0 + 2.0 * std::abs(alpha_ * static_cast<double>(n + 1) * ctx_.log_p()) +
                   (a + abs_l) / std::abs(da) + (b + abs_l) / std::abs(db) + (a + b) / (b - a));
      ++terms;
    }
    const complex v = acc.value();
    return {v, tail + rounding + 4.0 * machine_eps * std::abs(v), terms};
  }

  /// M_0 - M_{p^g} through its one-sided series; finite at lambda = 0.
  MEvaluation diff(long gamma, complex lambda, double tol = default_series_tol) const {
    check_poles(lambda, 1 - gamma, max_index);
    MEvaluation s = scaled_sum(lambda, 1, 2 - gamma, std::nullopt, tol);
    return s + single_term(static_cast<double>(1 - gamma), 1 - gamma, lambda, 1);
  }

  /// M_0 + M_{p^g} = 2((p-1)/p) sum_{N <= -g} + ((p-2)/p) p^{1-g}/(p^{a(1-g)} - l)
  ///                 + ((p-1)/p) sum_{N >= 2-g}.
  MEvaluation sum(long gamma, complex lambda, double tol = default_series_tol) const {
    check_zero(lambda);
    check_poles(lambda, min_index, -gamma);
    check_poles(lambda, 2 - gamma, max_index);
    const double p = ctx_.p();
    if (ctx_.prime() != 2)
      check_poles(lambda, 1 - gamma, 1 - gamma);
    MEvaluation low = scaled_sum(lambda, 1, std::nullopt, -gamma, tol / 2);
    MEvaluation high = scaled_sum(lambda, 1, 2 - gamma, std::nullopt, tol / 2);
    MEvaluation mid;
    if (ctx_.prime() != 2) {
      mid = single_term(static_cast<double>(1 - gamma), 1 - gamma, lambda, 1);
      mid.value *= (p - 2.0) / p;
      mid.error_bound *= (p - 2.0) / p;
    }
    low.value *= 2.0;
    low.error_bound *= 2.0;
    return low + mid + high;
  }

  void check_zero(complex lambda) const {
    if (std::abs(lambda) <= zero_guard_abs) {
      std::ostringstream os;
      os << "lambda = " << lambda << " is within " << zero_guard_abs
         << " of 0, the accumulation point of the spectrum";
      throw guard_violation(os.str());
    }
  }

  void check_poles(complex lambda, long lo, long hi) const {
    if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()))
      throw validation_error("spectral parameter is not finite");
    if (auto m = guarded_pole(lambda, lo, hi)) {
      std::ostringstream os;
      os.precision(17);
      os << "lambda = " << lambda << " is within relative " << pole_guard_rel
         << " of the pole p^(alpha*" << *m << ") = " << pole(*m);
      throw guard_violation(os.str());
    }
  }

private:
  static constexpr long min_index = std::numeric_limits<long>::min() / 4;
  static constexpr long max_index = std::numeric_limits<long>::max() / 4;
  static constexpr long max_terms = 2'000'000;

  /// c * p^{e} / (p^{a m} - l)^k with its rounding bound; c = 1.
  MEvaluation single_term(double e, long m, complex lambda, int k) const {
    const double pm = pole(m);
    const complex d = pm - lambda;
    const complex term = ctx_.pow(e) / (k == 1 ? d : d * d);
    const double rel = machine_eps * (4.0 + std::abs(alpha_ * static_cast<double>(m) * ctx_.log_p()) +
                                      k * (pm + std::abs(lambda)) / std::abs(d));
    return {term, std::abs(term) * rel, 1};
  }

  /// ((p-1)/p) sum_{N=lo}^{hi} p^N / (p^{aN} - l)^k with either end possibly
  /// infinite. Each infinite tail is cut where its bound drops below tol/2.
  MEvaluation scaled_sum(complex lambda, int k, std::optional<long> lo, std::optional<long> hi,
                         double tol) const {
    if (!(tol > 0))
      throw validation_error("series tolerance must be positive");
    const double p = ctx_.p();
    const double log_p = ctx_.log_p();
    const double abs_l = std::abs(lambda);
    const double scale = (p - 1.0) / p;
    const double part = tol / (2.0 * scale);
    double trunc = 0.0;

    long first = 0, last = 0;
    if (lo) {
      first = *lo;
    } else {
      // For N < L: p^{aN} <= |l|/2, |term| <= (2/|l|)^k p^N, and the tail
      // sums to (2/|l|)^k p^L / (p - 1).
      long l0 = static_cast<long>(std::floor(std::log(abs_l / 2.0) / (alpha_ * log_p)));
      const double need = (std::log(part * (p - 1.0)) + k * std::log(abs_l / 2.0)) / log_p;
      long cut = std::min(l0, static_cast<long>(std::floor(need)));
      if (hi)
        cut = std::min(cut, *hi + 1);
      first = cut;
      trunc += std::pow(2.0 / abs_l, k) * ctx_.pow(static_cast<double>(cut)) / (p - 1.0);
    }
    if (hi) {
      last = *hi;
    } else {
      // For N > U: p^{aN} >= 2|l|, |term| <= 2^k p^{N(1-ka)}, and the tail
      // sums to 2^k q^{U+1} / (1 - q) with q = p^{1-ka}.
      const double expo = 1.0 - k * alpha_;
      const double q = std::pow(p, expo);
      long u0 = abs_l > 0 ? static_cast<long>(std::ceil(std::log(2.0 * abs_l) / (alpha_ * log_p))) : first;
      const double need = std::log(part * (1.0 - q) / std::pow(2.0, k)) / (expo * log_p) - 1.0;
      long cut = std::max(u0, static_cast<long>(std::ceil(need)));
      cut = std::max(cut, first - 1);
      last = cut;
      trunc += std::pow(2.0, k) * std::pow(p, expo * static_cast<double>(cut + 1)) / (1.0 - q);
    }
    if (last - first > max_terms)
      throw numerical_failure("M-series window exceeds the term cap; alpha too close to 1 or tol too small");

    CompensatedSum<complex> acc;
    double rounding = 0.0;
    long terms = 0;
    for (long n = first; n <= last; ++n) {
      const double pm = pole(n);
      const complex d = pm - lambda;
      const complex term = ctx_.pow(static_cast<double>(n)) / (k == 1 ? d : d * d);
      acc.add(term);
      rounding += std::abs(term) * (4.0 + std::abs(alpha_ * static_cast<double>(n) * log_p) +
                                    k * (pm + abs_l) / std::abs(d));
      ++terms;
    }
    const complex v = acc.value();
    rounding = machine_eps * (rounding + 4.0 * std::abs(v));
    return {scale * v, scale * (trunc + rounding), terms};
  }

  PrimeContext ctx_;
  double alpha_;
};

// Free-function spellings of the evaluator.

inline MEvaluation eval_M0(const PrimeContext& ctx, double alpha, complex lambda,
                           double tol = default_series_tol) {
  return MSeries(ctx, alpha).m0(lambda, tol);
}
inline MEvaluation eval_Mgamma(const PrimeContext& ctx, long gamma, double alpha, complex lambda,
                               double tol = default_series_tol) {
  return MSeries(ctx, alpha).m_gamma(gamma, lambda, tol);
}
inline MEvaluation eval_M0_prime(const PrimeContext& ctx, double alpha, complex lambda,
                                 double tol = default_series_tol) {
  return MSeries(ctx, alpha).m0_prime(lambda, tol);
}
inline MEvaluation eval_diff(const PrimeContext& ctx, long gamma, double alpha, complex lambda,
                             double tol = default_series_tol) {
  return MSeries(ctx, alpha).diff(gamma, lambda, tol);
}

} // namespace padic_spectra

#endif // PADIC_SPECTRA_MSERIES_HPP
