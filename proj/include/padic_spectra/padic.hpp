#ifndef PADIC_SPECTRA_PADIC_HPP
#define PADIC_SPECTRA_PADIC_HPP

// Exact arithmetic on elements of Q_p represented as rationals over a fixed
// prime: valuation, norm, fractional part, the additive character and the
// coset representatives that index the wavelet basis.

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <compare>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "padic_spectra/errors.hpp"

namespace padic_spectra {

/// The prime p shared by every value of a computation.
class PrimeContext {
public:
  explicit PrimeContext(unsigned long p) : p_(p) {
    if (!is_prime(p))
      throw validation_error("p = " + std::to_string(p) + " is not a prime");
  }

  unsigned long prime() const noexcept { return p_; }
  double p() const noexcept { return static_cast<double>(p_); }
  double log_p() const noexcept { return std::log(static_cast<double>(p_)); }

  /// p^n as a double.
  double pow(double n) const noexcept { return std::pow(p(), n); }

  /// p^n as an exact rational; n may be negative.
  mpq_class pow_exact(long n) const {
    mpz_class m;
    mpz_ui_pow_ui(m.get_mpz_t(), p_, static_cast<unsigned long>(n < 0 ? -n : n));
    if (n >= 0)
      return mpq_class(m);
    mpq_class r(mpz_class(1), m);
    r.canonicalize();
    return r;
  }

  friend bool operator==(const PrimeContext&, const PrimeContext&) = default;

  static bool is_prime(unsigned long n) noexcept {
    if (n < 2)
      return false;
    if (n % 2 == 0)
      return n == 2;
    for (unsigned long d = 3; d <= n / d; d += 2)
      if (n % d == 0)
        return false;
    return true;
  }

private:
  unsigned long p_;
};

/// exp(2*pi*i*t) for a rational phase t; only the final step is floating.
inline std::complex<double> unit_phase(const mpq_class& t) {
  mpz_class whole;
  mpz_fdiv_q(whole.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
  mpq_class r = t - whole;
  if (r > mpq_class(1, 2))
    r -= 1;
  const double angle = 2.0 * std::numbers::pi * r.get_d();
  return {std::cos(angle), std::sin(angle)};
}

/// An element eps of Q_p/Z_p written as sum_{i=1}^m eps_i p^{-i}. The digit
/// list is canonical: the last digit is nonzero, the empty list is eps = 0.
class CosetEpsilon {
public:
  CosetEpsilon() = default;

  CosetEpsilon(std::vector<unsigned long> digits, const PrimeContext& ctx)
      : digits_(std::move(digits)) {
    for (auto d : digits_)
      if (d >= ctx.prime())
        throw validation_error("coset digit out of range 0..p-1");
    if (!digits_.empty() && digits_.back() == 0)
      throw validation_error("coset digits must not end with a zero digit");
  }

  /// Builds the digits of a fractional part a/p^k with 0 <= a < p^k.
  static CosetEpsilon from_fraction(const mpq_class& frac, const PrimeContext& ctx) {
    CosetEpsilon eps;
    if (frac == 0)
      return eps;
    mpz_class a = frac.get_num();
    mpz_class den = frac.get_den();
    const mpz_class p(ctx.prime());
    std::vector<unsigned long> reversed;
    while (den > 1) {
      mpz_class digit = a % p;
      reversed.push_back(digit.get_ui());
      a /= p;
      den /= p;
    }
    if (a != 0 || den != 1)
      throw validation_error("value is not a canonical fractional part");
    eps.digits_.assign(reversed.rbegin(), reversed.rend());
    while (!eps.digits_.empty() && eps.digits_.back() == 0)
      eps.digits_.pop_back();
    return eps;
  }

  const std::vector<unsigned long>& digits() const noexcept { return digits_; }
  bool is_zero() const noexcept { return digits_.empty(); }

  mpq_class to_rational(const PrimeContext& ctx) const {
    mpz_class a = 0;
    for (auto d : digits_)
      a = a * ctx.prime() + d;
    mpq_class r(a, mpz_class(1));
    r *= ctx.pow_exact(-static_cast<long>(digits_.size()));
    r.canonicalize();
    return r;
  }

  friend auto operator<=>(const CosetEpsilon&, const CosetEpsilon&) = default;

private:
  std::vector<unsigned long> digits_;
};

/// A rational number viewed as an element of Q_p.
class PAdicRational {
public:
  PAdicRational(const PrimeContext& ctx, mpq_class value) : ctx_(ctx), value_(std::move(value)) {
    value_.canonicalize();
  }
  PAdicRational(const PrimeContext& ctx, long num, long den = 1) : ctx_(ctx) {
    if (den == 0)
      throw validation_error("zero denominator");
    value_ = mpq_class(mpz_class(num), mpz_class(den));
    value_.canonicalize();
  }

  /// Parses "a/b" or "a" (optional sign, surrounding whitespace ignored).
  static PAdicRational parse(const PrimeContext& ctx, std::string_view text) {
    std::string s(text);
    auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    const auto slash = s.find('/');
    auto valid_int = [](const std::string& part, bool allow_sign) {
      std::size_t i = 0;
      if (allow_sign && i < part.size() && (part[i] == '-' || part[i] == '+'))
        ++i;
      if (i == part.size())
        return false;
      return std::all_of(part.begin() + static_cast<std::ptrdiff_t>(i), part.end(),
                         [](unsigned char c) { return std::isdigit(c); });
    };
    std::string num = slash == std::string::npos ? s : s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!valid_int(num, true) || !valid_int(den, false))
      throw validation_error("malformed rational literal '" + std::string(text) + "'");
    if (num.front() == '+')
      num.erase(0, 1);
    mpz_class n(num, 10), d(den, 10);
    if (d == 0)
      throw validation_error("zero denominator in '" + std::string(text) + "'");
    return PAdicRational(ctx, mpq_class(n, d));
  }

  const PrimeContext& context() const noexcept { return ctx_; }
  const mpq_class& value() const noexcept { return value_; }
  bool is_zero() const noexcept { return value_ == 0; }
  double to_double() const { return value_.get_d(); }

  std::string to_string() const {
    if (value_.get_den() == 1)
      return value_.get_num().get_str();
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
  }

  /// gamma with x = p^gamma * m/n, p dividing neither m nor n; nullopt for 0.
  std::optional<long> valuation() const {
    if (is_zero())
      return std::nullopt;
    return count_factor(value_.get_num()) - count_factor(value_.get_den());
  }

  /// |x|_p = p^{-gamma}, and 0 for x = 0.
  double norm() const {
    const auto v = valuation();
    return v ? ctx_.pow(-static_cast<double>(*v)) : 0.0;
  }

  /// {x}_p in [0, 1): the unique a/p^k (k = -gamma) with |x - a/p^k|_p <= 1.
  mpq_class fractional_part() const {
    const auto v = valuation();
    if (!v || *v >= 0)
      return mpq_class(0);
    const long k = -*v;
    mpz_class modulus;
    mpz_ui_pow_ui(modulus.get_mpz_t(), ctx_.prime(), static_cast<unsigned long>(k));
    const mpz_class unit_den = value_.get_den() / modulus;
    mpz_class inverse;
    mpz_invert(inverse.get_mpz_t(), unit_den.get_mpz_t(), modulus.get_mpz_t());
    mpz_class a = (value_.get_num() * inverse) % modulus;
    if (a < 0)
      a += modulus;
    mpq_class frac(a, modulus);
    frac.canonicalize();
    return frac;
  }

  /// chi_p(x) = exp(2 pi i {x}_p).
  std::complex<double> character() const { return unit_phase(fractional_part()); }

  /// First K digits x^0 .. x^{K-1} of the canonical presentation
  /// x = p^gamma sum_i x^i p^i (display helper; empty for x = 0).
  std::vector<unsigned long> digits(std::size_t count) const {
    std::vector<unsigned long> out;
    const auto v = valuation();
    if (!v)
      return out;
    const mpq_class unit = value_ * ctx_.pow_exact(-*v);
    mpz_class modulus;
    mpz_ui_pow_ui(modulus.get_mpz_t(), ctx_.prime(), static_cast<unsigned long>(count));
    mpz_class inverse;
    mpz_invert(inverse.get_mpz_t(), unit.get_den().get_mpz_t(), modulus.get_mpz_t());
    mpz_class a = (unit.get_num() * inverse) % modulus;
    if (a < 0)
      a += modulus;
    const mpz_class p(ctx_.prime());
    for (std::size_t i = 0; i < count; ++i) {
      mpz_class d = a % p;
      out.push_back(d.get_ui());
      a /= p;
    }
    return out;
  }

  /// p^n * x.
  PAdicRational scaled(long n) const { return PAdicRational(ctx_, value_ * ctx_.pow_exact(n)); }

  PAdicRational operator-() const { return PAdicRational(ctx_, mpq_class(-value_)); }

  friend PAdicRational operator+(const PAdicRational& a, const PAdicRational& b) {
    check_same(a, b);
    return PAdicRational(a.ctx_, mpq_class(a.value_ + b.value_));
  }
  friend PAdicRational operator-(const PAdicRational& a, const PAdicRational& b) {
    check_same(a, b);
    return PAdicRational(a.ctx_, mpq_class(a.value_ - b.value_));
  }
  friend PAdicRational operator*(const PAdicRational& a, const PAdicRational& b) {
    check_same(a, b);
    return PAdicRational(a.ctx_, mpq_class(a.value_ * b.value_));
  }
  friend PAdicRational operator/(const PAdicRational& a, const PAdicRational& b) {
    check_same(a, b);
    if (b.is_zero())
      throw validation_error("division by zero");
    return PAdicRational(a.ctx_, mpq_class(a.value_ / b.value_));
  }
  friend bool operator==(const PAdicRational& a, const PAdicRational& b) {
    return a.ctx_ == b.ctx_ && a.value_ == b.value_;
  }

  static void check_same(const PAdicRational& a, const PAdicRational& b) {
    if (!(a.ctx_ == b.ctx_))
      throw context_mismatch("p-adic values over different primes");
  }

private:
  long count_factor(const mpz_class& z) const {
    if (z == 0)
      return 0;
    mpz_class rest;
    const mpz_class p(ctx_.prime());
    return static_cast<long>(mpz_remove(rest.get_mpz_t(), z.get_mpz_t(), p.get_mpz_t()));
  }

  PrimeContext ctx_;
  mpq_class value_;
};

/// gamma with |x - y|_p = p^gamma; nullopt when x = y (distance 0).
inline std::optional<long> distance_exponent(const PAdicRational& x, const PAdicRational& y) {
  const auto v = (x - y).valuation();
  if (!v)
    return std::nullopt;
  return -*v;
}

/// The coset eps = {p^N x}_p, i.e. the unique eps with |p^N x - eps|_p <= 1.
inline CosetEpsilon coset_rep(long n, const PAdicRational& x) {
  return CosetEpsilon::from_fraction(x.scaled(n).fractional_part(), x.context());
}

} // namespace padic_spectra

#endif // PADIC_SPECTRA_PADIC_HPP
