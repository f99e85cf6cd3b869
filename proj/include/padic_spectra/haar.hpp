#ifndef PADIC_SPECTRA_HAAR_HPP
#define PADIC_SPECTRA_HAAR_HPP

// Exact Haar integration of locally constant, compactly supported functions
// built from modulated ball indicators
//
//     x -> c * chi_p(a x) * 1[|x - center|_p <= p^r].
//
// The class is closed under products with characters, pointwise products
// (balls are nested or disjoint) and the Fourier transform, so integrals,
// inner products and transforms need no numerical quadrature.

#include <optional>
#include <vector>

#include "padic_spectra/numeric.hpp"
#include "padic_spectra/padic.hpp"

namespace padic_spectra {

/// Closed ball B_r(center) = { x : |x - center|_p <= p^r }.
struct Ball {
  PAdicRational center;
  long radius;

  bool contains(const PAdicRational& x) const {
    const auto v = (x - center).valuation();
    return !v || *v >= -radius;
  }

  /// Intersection of two balls: the smaller one, or nothing.
  static std::optional<Ball> intersect(const Ball& a, const Ball& b) {
    const Ball& small = a.radius <= b.radius ? a : b;
    const Ball& large = a.radius <= b.radius ? b : a;
    if (!large.contains(small.center))
      return std::nullopt;
    return small;
  }

  /// Haar measure p^radius.
  double measure() const { return center.context().pow(static_cast<double>(radius)); }
};

struct ModulatedIndicator {
  complex coefficient;
  PAdicRational modulation;
  Ball ball;

  complex operator()(const PAdicRational& x) const {
    if (!ball.contains(x))
      return {0.0, 0.0};
    return coefficient * (modulation * x).character();
  }
};

/// Finite sum of modulated indicators.
class StepFunction {
public:
  StepFunction() = default;
  explicit StepFunction(std::vector<ModulatedIndicator> terms) : terms_(std::move(terms)) {}

  const std::vector<ModulatedIndicator>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }
  void add(ModulatedIndicator term) { terms_.push_back(std::move(term)); }

  complex operator()(const PAdicRational& x) const {
    CompensatedSum<complex> sum;
    for (const auto& t : terms_)
      sum.add(t(x));
    return sum.value();
  }

  StepFunction& operator+=(const StepFunction& other) {
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    return *this;
  }
  friend StepFunction operator+(StepFunction a, const StepFunction& b) { return a += b; }
  friend StepFunction operator*(complex s, StepFunction f) {
    for (auto& t : f.terms_)
      t.coefficient *= s;
    return f;
  }

private:
  std::vector<ModulatedIndicator> terms_;
};

/// int_{B_r(c)} chi(a x) d_p x = chi(a c) p^r Omega(p^r |a|_p).
inline complex integrate(const ModulatedIndicator& t) {
  const auto v = t.modulation.valuation();
  if (v && *v < t.ball.radius)
    return {0.0, 0.0};
  return t.coefficient * (t.modulation * t.ball.center).character() * t.ball.measure();
}

inline complex integrate(const StepFunction& f) {
  CompensatedSum<complex> sum;
  for (const auto& t : f.terms())
    sum.add(integrate(t));
  return sum.value();
}

/// The p children B_{r-1}(c + i p^{-r}), i = 0..p-1, of the term's ball.
inline std::vector<ModulatedIndicator> split(const ModulatedIndicator& t) {
  const auto& ctx = t.ball.center.context();
  std::vector<ModulatedIndicator> children;
  children.reserve(ctx.prime());
  const PAdicRational step(ctx, ctx.pow_exact(-t.ball.radius));
  for (unsigned long i = 0; i < ctx.prime(); ++i) {
    const PAdicRational offset(ctx, mpq_class(step.value() * i));
    children.push_back({t.coefficient, t.modulation, Ball{t.ball.center + offset, t.ball.radius - 1}});
  }
  return children;
}

/// F[t](xi) = int chi(xi x) t(x) d_p x
///          = c p^r chi(a c) chi(c xi) 1[|xi + a|_p <= p^{-r}].
inline ModulatedIndicator fourier(const ModulatedIndicator& t) {
  const complex coef = t.coefficient * t.ball.measure() * (t.modulation * t.ball.center).character();
  return {coef, t.ball.center, Ball{-t.modulation, -t.ball.radius}};
}

inline StepFunction fourier(const StepFunction& f) {
  std::vector<ModulatedIndicator> out;
  out.reserve(f.terms().size());
  for (const auto& t : f.terms())
    out.push_back(fourier(t));
  return StepFunction(std::move(out));
}

/// Pointwise f * conj(g), one term.
inline std::optional<ModulatedIndicator> conj_product(const ModulatedIndicator& f,
                                                      const ModulatedIndicator& g) {
  auto ball = Ball::intersect(f.ball, g.ball);
  if (!ball)
    return std::nullopt;
  return ModulatedIndicator{f.coefficient * std::conj(g.coefficient), f.modulation - g.modulation,
                            *ball};
}

/// (f, g) = int f(x) conj(g(x)) d_p x.
inline complex inner_product(const StepFunction& f, const StepFunction& g) {
  CompensatedSum<complex> sum;
  for (const auto& a : f.terms())
    for (const auto& b : g.terms())
      if (auto prod = conj_product(a, b))
        sum.add(integrate(*prod));
  return sum.value();
}

} // namespace padic_spectra

#endif // PADIC_SPECTRA_HAAR_HPP
