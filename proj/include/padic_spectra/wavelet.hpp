#ifndef PADIC_SPECTRA_WAVELET_HPP
#define PADIC_SPECTRA_WAVELET_HPP

// The p-adic wavelet basis
//
//     psi_{N j eps}(x) = p^{-N/2} chi(p^{N-1} j x) Omega(|p^N x - eps|_p),
//
// N in Z, j = 1..p-1, eps in Q_p/Z_p. It is orthonormal in L2(Q_p) and
// diagonalizes the Vladimirov operator: D^alpha psi_{Nj eps} =
// p^{alpha(1-N)} psi_{Nj eps}. Finite combinations are stored sparsely.

#include <cmath>
#include <map>
#include <numbers>
#include <utility>

#include "padic_spectra/haar.hpp"
#include "padic_spectra/numeric.hpp"
#include "padic_spectra/padic.hpp"

namespace padic_spectra {

struct WaveletIndex {
  long n = 0;
  unsigned long j = 1;
  CosetEpsilon eps;

  friend auto operator<=>(const WaveletIndex&, const WaveletIndex&) = default;
};

inline WaveletIndex make_index(const PrimeContext& ctx, long n, unsigned long j, CosetEpsilon eps = {}) {
  if (j < 1 || j >= ctx.prime())
    throw validation_error("wavelet frequency j must lie in 1..p-1");
  return {n, j, std::move(eps)};
}

/// Eigenvalue p^{alpha(1-N)} of D^alpha on scale N.
inline double dalpha_eigenvalue(const PrimeContext& ctx, double alpha, long n) {
  return ctx.pow(alpha * static_cast<double>(1 - n));
}

inline complex eval_wavelet(const PrimeContext& ctx, const WaveletIndex& idx, const PAdicRational& x) {
  const PAdicRational shifted = x.scaled(idx.n) - PAdicRational(ctx, idx.eps.to_rational(ctx));
  const auto v = shifted.valuation();
  if (v && *v < 0)
    return {0.0, 0.0};
  const PAdicRational arg(ctx, mpq_class(x.scaled(idx.n - 1).value() * idx.j));
  return ctx.pow(-0.5 * static_cast<double>(idx.n)) * arg.character();
}

/// Finite complex-weighted combination of basis wavelets.
class WaveletSum {
public:
  /// Coefficients with modulus below this are not stored.
  static constexpr double flush_threshold = 1e-200;

  using map_type = std::map<WaveletIndex, complex>;

  explicit WaveletSum(const PrimeContext& ctx) : ctx_(ctx) {}

  const PrimeContext& context() const noexcept { return ctx_; }
  const map_type& coefficients() const noexcept { return coeffs_; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  bool empty() const noexcept { return coeffs_.empty(); }
  auto begin() const { return coeffs_.begin(); }
  auto end() const { return coeffs_.end(); }

  complex coefficient(const WaveletIndex& idx) const {
    auto it = coeffs_.find(idx);
    return it == coeffs_.end() ? complex{} : it->second;
  }

  /// Adds c to the coefficient of idx.
  void add(const WaveletIndex& idx, complex c) {
    if (idx.j < 1 || idx.j >= ctx_.prime())
      throw validation_error("wavelet frequency j must lie in 1..p-1");
    auto [it, inserted] = coeffs_.try_emplace(idx, c);
    if (!inserted)
      it->second += c;
    if (std::abs(it->second) < flush_threshold)
      coeffs_.erase(it);
  }

  /// Smallest and largest scale present; {0, -1} when empty.
  std::pair<long, long> scale_range() const {
    if (coeffs_.empty())
      return {0, -1};
    long lo = coeffs_.begin()->first.n, hi = lo;
    for (const auto& [idx, c] : coeffs_) {
      lo = std::min(lo, idx.n);
      hi = std::max(hi, idx.n);
    }
    return {lo, hi};
  }

  WaveletSum& operator+=(const WaveletSum& other) {
    PAdicRational::check_same(PAdicRational(ctx_, 0), PAdicRational(other.ctx_, 0));
    for (const auto& [idx, c] : other.coeffs_)
      add(idx, c);
    return *this;
  }
  WaveletSum& operator-=(const WaveletSum& other) { return *this += complex(-1.0) * other; }
  friend WaveletSum operator+(WaveletSum a, const WaveletSum& b) { return a += b; }
  friend WaveletSum operator-(WaveletSum a, const WaveletSum& b) { return a -= b; }
  friend WaveletSum operator*(complex s, const WaveletSum& w) {
    WaveletSum out(w.ctx_);
    for (const auto& [idx, c] : w.coeffs_)
      out.add(idx, s * c);
    return out;
  }

  /// Coefficients restricted to scales lo..hi.
  WaveletSum restricted(long lo, long hi) const {
    WaveletSum out(ctx_);
    for (const auto& [idx, c] : coeffs_)
      if (idx.n >= lo && idx.n <= hi)
        out.coeffs_.emplace(idx, c);
    return out;
  }

  /// Applies s(idx) * coefficient to every stored term.
  template <typename Fn>
  WaveletSum transformed(Fn&& factor) const {
    WaveletSum out(ctx_);
    for (const auto& [idx, c] : coeffs_)
      out.add(idx, factor(idx) * c);
    return out;
  }

  double norm_sq() const {
    CompensatedSum<double> s;
    for (const auto& [idx, c] : coeffs_)
      s.add(std::norm(c));
    return s.value();
  }

private:
  PrimeContext ctx_;
  map_type coeffs_;
};

inline complex evaluate(const WaveletSum& ws, const PAdicRational& x) {
  CompensatedSum<complex> sum;
  for (const auto& [idx, c] : ws)
    sum.add(c * eval_wavelet(ws.context(), idx, x));
  return sum.value();
}

/// L2 pairing (a, b) computed in coefficient space (orthonormal basis).
inline complex inner_product(const WaveletSum& a, const WaveletSum& b) {
  CompensatedSum<complex> sum;
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  for (const auto& [idx, c] : small) {
    const complex d = large.coefficient(idx);
    sum.add(&small == &a ? c * std::conj(d) : d * std::conj(c));
  }
  return sum.value();
}

/// One modulated indicator per wavelet: modulation p^{N-1} j, ball
/// { x : |x - p^{-N} eps|_p <= p^N }.
inline StepFunction to_step_function(const WaveletSum& ws) {
  const auto& ctx = ws.context();
  StepFunction f;
  for (const auto& [idx, c] : ws) {
    const PAdicRational modulation(ctx, mpq_class(ctx.pow_exact(idx.n - 1) * idx.j));
    const PAdicRational center(ctx, mpq_class(idx.eps.to_rational(ctx) * ctx.pow_exact(-idx.n)));
    f.add({c * ctx.pow(-0.5 * static_cast<double>(idx.n)), modulation, Ball{center, idx.n}});
  }
  return f;
}

inline WaveletSum apply_dalpha(const WaveletSum& ws, double alpha) {
  if (!(alpha > 0))
    throw validation_error("alpha must be positive");
  return ws.transformed([&](const WaveletIndex& idx) {
    return complex(dalpha_eigenvalue(ws.context(), alpha, idx.n));
  });
}

/// (D^alpha - lambda) applied termwise.
inline WaveletSum apply_shifted(const WaveletSum& ws, double alpha, complex lambda) {
  if (!(alpha > 0))
    throw validation_error("alpha must be positive");
  return ws.transformed([&](const WaveletIndex& idx) {
    return dalpha_eigenvalue(ws.context(), alpha, idx.n) - lambda;
  });
}

/// Truncation of delta_{x_k} = sum_N sum_j p^{-N/2} chi(-p^{N-1} j x_k)
/// psi_{N j {p^N x_k}} to scales n_min..n_max.
inline WaveletSum delta_coefficients(const PAdicRational& xk, long n_min, long n_max) {
  if (n_min > n_max)
    throw validation_error("empty scale window");
  const auto& ctx = xk.context();
  WaveletSum out(ctx);
  for (long n = n_min; n <= n_max; ++n) {
    const CosetEpsilon eps = coset_rep(n, xk);
    const double scale = ctx.pow(-0.5 * static_cast<double>(n));
    for (unsigned long j = 1; j < ctx.prime(); ++j) {
      const PAdicRational arg(ctx, mpq_class(-xk.scaled(n - 1).value() * j));
      out.add({n, j, eps}, scale * arg.character());
    }
  }
  return out;
}

/// U^m with U f(x) = p^{-1/2} f(p x): psi_{N j eps} -> psi_{(N+m) j eps}.
inline WaveletSum dilate(const WaveletSum& ws, long m = 1) {
  WaveletSum out(ws.context());
  for (const auto& [idx, c] : ws)
    out.add({idx.n + m, idx.j, idx.eps}, c);
  return out;
}

/// Coefficients of the pointwise complex conjugate. On the support of
/// psi_{Nj eps} one has chi(-p^N x) = chi(-eps), hence
/// conj(psi_{N j eps}) = chi(-eps) psi_{N (p-j) eps}.
inline WaveletSum conjugate(const WaveletSum& ws) {
  const auto& ctx = ws.context();
  WaveletSum out(ctx);
  for (const auto& [idx, c] : ws) {
    const complex phase = unit_phase(mpq_class(-idx.eps.to_rational(ctx)));
    out.add({idx.n, ctx.prime() - idx.j, idx.eps}, std::conj(c) * phase);
  }
  return out;
}

/// psi~_{N j 0} = (j/(j+1))^{1/2} [psi_{N (j+1) 0} - (1/j) sum_{i<=j} psi_{N i 0}],
/// j = 1..p-2: an orthonormal family vanishing at 0.
inline WaveletSum modified_wavelet(const PrimeContext& ctx, long n, unsigned long j) {
  if (j < 1 || j + 2 > ctx.prime())
    throw validation_error("modified wavelet index j must lie in 1..p-2");
  const double jd = static_cast<double>(j);
  const double norm = std::sqrt(jd / (jd + 1.0));
  WaveletSum out(ctx);
  out.add({n, j + 1, {}}, norm);
  for (unsigned long i = 1; i <= j; ++i)
    out.add({n, i, {}}, -norm / jd);
  return out;
}

} // namespace padic_spectra

#endif // PADIC_SPECTRA_WAVELET_HPP
