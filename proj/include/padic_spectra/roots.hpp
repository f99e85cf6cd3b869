#ifndef PADIC_SPECTRA_ROOTS_HPP
#define PADIC_SPECTRA_ROOTS_HPP

// Root location for characteristic functions.
//
// Real axis: a function sampled on an ordered grid (one spectral interval or
// the negative axis), sign changes refined by bisection, and touching zeros
// (even multiplicity) caught by minimizing toward zero between samples.
//
// Complex plane: winding number of f around rectangles by adaptive contour
// sampling, recursive subdivision, Newton polish with a supplied f/f'.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <vector>

#include "padic_spectra/errors.hpp"
#include "padic_spectra/numeric.hpp"
#include "padic_spectra/padic.hpp"

namespace padic_spectra {

struct ScanOptions {
  /// Uniform samples per interval in the exponent s of l = p^{alpha(N+s)}.
  int initial_points = 64;
  /// Hard cap on function evaluations per interval.
  int max_evaluations = 1 << 14;
  /// Bisection stops once the bracket is this small relative to |l|.
  double root_rel_tol = 1e-13;
  /// Null measure (e.g. sigma_min/sigma_max) below which a touching
  /// minimum counts as a root, and the rank cut for multiplicities.
  double null_threshold = 1e-8;
  /// Negative axis l = -e^t, t in [t_min, t_max], with this many samples.
  double t_min = -40.0;
  double t_max = 40.0;
  int negative_points = 256;
};

struct RootHit {
  double lambda;
  /// Width of the final bracket around lambda.
  double width;
  /// Found as a touching zero rather than a sign change.
  bool tangent;
};

/// Margin in s keeping samples outside the relative pole guard.
inline double interval_margin(const PrimeContext& ctx, double alpha) {
  return 4e-9 / (alpha * ctx.log_p());
}

/// Ordered samples of (p^{aN}, p^{a(N+1)}): uniform in s, with extra points
/// halving toward both ends until the guard margin.
inline std::vector<double> interval_samples(const PrimeContext& ctx, double alpha, long n,
                                            const ScanOptions& opt) {
  const double margin = interval_margin(ctx, alpha);
  std::vector<double> s;
  const int m = std::max(opt.initial_points, 4);
  for (int i = 1; i < m; ++i)
    s.push_back(static_cast<double>(i) / m);
  for (double d = 0.5 / m; d > margin; d *= 0.5) {
    s.push_back(d);
    s.push_back(1.0 - d);
  }
  s.push_back(margin);
  s.push_back(1.0 - margin);
  std::sort(s.begin(), s.end());
  std::vector<double> out;
  out.reserve(s.size());
  for (double si : s)
    out.push_back(ctx.pow(alpha * (static_cast<double>(n) + si)));
  return out;
}

/// Ordered samples of the negative axis l = -e^t, clamped so |l| stays
/// above twice the zero guard.
inline std::vector<double> negative_axis_samples(const ScanOptions& opt, double zero_guard) {
  const double t_lo = std::max(opt.t_min, std::log(2.0 * zero_guard));
  const double t_hi = opt.t_max;
  if (!(t_hi > t_lo))
    throw validation_error("empty negative-axis scan range");
  std::vector<double> out;
  const int m = std::max(opt.negative_points, 8);
  for (int i = m; i >= 0; --i)
    out.push_back(-std::exp(t_lo + (t_hi - t_lo) * i / m));
  return out;
}

/// Sign-change and touching-zero scan of a real function over ordered samples.
class RealScanner {
public:
  using Fn = std::function<double(double)>;

  /// f: the real characteristic function. null_measure: a nonnegative
  /// quantity vanishing exactly at roots, scale-free (sigma_min/sigma_max).
  RealScanner(Fn f, Fn null_measure, ScanOptions opt)
      : f_(std::move(f)), null_(std::move(null_measure)), opt_(opt) {}

  std::vector<RootHit> scan(const std::vector<double>& samples) {
    evaluations_ = 0;
    std::vector<double> values(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
      values[i] = eval(samples[i]);

    std::vector<RootHit> hits;
    auto sign = [](double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); };
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (values[i] == 0.0)
        hits.push_back({samples[i], 0.0, false});
      if (i + 1 < samples.size() && sign(values[i]) * sign(values[i + 1]) < 0)
        hits.push_back(bisect(samples[i], values[i], samples[i + 1], values[i + 1]));
    }
    for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
      const int sg = sign(values[i]);
      if (sg == 0 || sign(values[i - 1]) != sg || sign(values[i + 1]) != sg)
        continue;
      if (std::abs(values[i]) >= std::abs(values[i - 1]) || std::abs(values[i]) >= std::abs(values[i + 1]))
        continue;
      examine_dip(samples[i - 1], samples[i], samples[i + 1], sg, hits);
    }
    std::sort(hits.begin(), hits.end(), [](const RootHit& a, const RootHit& b) { return a.lambda < b.lambda; });
    // A dip examined from two neighbouring samples can report the same root.
    std::vector<RootHit> unique;
    for (const auto& h : hits) {
      if (!unique.empty()) {
        const double gap = std::abs(h.lambda - unique.back().lambda);
        if (gap <= 4.0 * (h.width + unique.back().width) + 1e-15 * std::abs(h.lambda))
          continue;
      }
      unique.push_back(h);
    }
    return unique;
  }

  int evaluations() const noexcept { return evaluations_; }

private:
  double eval(double lambda) {
    if (++evaluations_ > opt_.max_evaluations)
      throw numerical_failure("root scan exceeded its evaluation cap");
    return f_(lambda);
  }

  RootHit bisect(double a, double fa, double b, double fb) {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (a + b);
      if (b - a <= opt_.root_rel_tol * std::abs(mid) || mid <= a || mid >= b)
        break;
      const double fm = eval(mid);
      if (fm == 0.0)
        return {mid, 0.0, false};
      if ((fm > 0) == (fa > 0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
        fb = fm;
      }
    }
    return {0.5 * (a + b), b - a, false};
  }

  /// Between samples a < c < b where |f| dips without changing sign: either
  /// the dip crosses zero (two close simple roots) or touches it.
  void examine_dip(double a, double c, double b, int sg, std::vector<RootHit>& hits) {
    auto g = [&](double x) { return sg * eval(x); };
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = a, hi = b;
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double g1 = g(x1), g2 = g(x2);
    for (int it = 0; it < 120 && hi - lo > opt_.root_rel_tol * std::abs(c); ++it) {
      if (g1 <= 0 || g2 <= 0) {
        const double x = g1 <= g2 ? x1 : x2;
        const double gx = std::min(g1, g2);
        if (gx == 0.0) {
          hits.push_back({x, 0.0, true});
          return;
        }
        const double fx = sg * gx;
        hits.push_back(bisect(a, sg * g(a), x, fx));
        hits.push_back(bisect(x, fx, b, sg * g(b)));
        return;
      }
      if (g1 < g2) {
        hi = x2;
        x2 = x1;
        g2 = g1;
        x1 = hi - phi * (hi - lo);
        g1 = g(x1);
      } else {
        lo = x1;
        x1 = x2;
        g1 = g2;
        x2 = lo + phi * (hi - lo);
        g2 = g(x2);
      }
    }
    const double xmin = g1 < g2 ? x1 : x2;
    // |f| is quadratic at a touching zero, so its minimizer is only known to
    // about sqrt(eps); the null measure is V-shaped and pins it down.
    double w = std::max(hi - lo, 1e-7 * std::abs(xmin));
    double l2 = std::max(a, xmin - w), h2 = std::min(b, xmin + w);
    auto nm = [&](double x) {
      ++evaluations_;
      return null_(x);
    };
    double y1 = h2 - phi * (h2 - l2), y2 = l2 + phi * (h2 - l2);
    double n1 = nm(y1), n2 = nm(y2);
    for (int it = 0; it < 200 && h2 - l2 > 1e-15 * std::abs(xmin); ++it) {
      if (n1 < n2) {
        h2 = y2;
        y2 = y1;
        n2 = n1;
        y1 = h2 - phi * (h2 - l2);
        n1 = nm(y1);
      } else {
        l2 = y1;
        y1 = y2;
        n1 = n2;
        y2 = l2 + phi * (h2 - l2);
        n2 = nm(y2);
      }
    }
    const double best = n1 < n2 ? y1 : y2;
    if (std::min(n1, n2) <= opt_.null_threshold)
      hits.push_back({best, h2 - l2, true});
  }

  Fn f_;
  Fn null_;
  ScanOptions opt_;
  int evaluations_ = 0;
};

/// Axis-aligned rectangle [re0, re1] x [im0, im1] in the lambda plane.
struct Rect {
  double re0, re1, im0, im1;

  bool contains(complex z, double slack = 0.0) const {
    return z.real() >= re0 - slack && z.real() <= re1 + slack && z.imag() >= im0 - slack &&
           z.imag() <= im1 + slack;
  }
  complex center() const { return {0.5 * (re0 + re1), 0.5 * (im0 + im1)}; }
  double size() const { return std::max(re1 - re0, im1 - im0); }
};

struct ContourOptions {
  /// Initial samples per rectangle edge.
  int edge_points = 16;
  /// Subdivision depth limit.
  int max_depth = 14;
  /// Cells smaller than this (relative to the starting rectangle) stop
  /// subdividing.
  double min_rel_size = 1e-9;
  /// Newton step tolerance relative to max(1, |z|).
  double newton_tol = 1e-14;
  int newton_iterations = 100;
  /// Distance from z to the nearest pole of f, if known. Segments are refined
  /// until they are short against it, so that a pole of order
  /// pole_order cannot wrap the argument between two samples.
  std::function<double(complex)> pole_distance;
  int pole_order = 1;
};

struct ComplexRoot {
  complex lambda;
  /// Winding number of the cell that produced it.
  int winding;
  /// Last Newton step size.
  double step;
};

/// Raised when a contour runs too close to a zero or singularity of f.
class contour_too_close : public numerical_failure {
public:
  using numerical_failure::numerical_failure;
};

/// Argument-principle zero finder for an analytic f on rectangles.
class ContourSearch {
public:
  /// f returns the function value and a magnitude scale for it; step returns
  /// the Newton step f/f' at z.
  using Fn = std::function<std::pair<complex, double>(complex)>;
  using Step = std::function<complex(complex)>;

  ContourSearch(Fn f, Step newton_step, ContourOptions opt)
      : f_(std::move(f)), step_(std::move(newton_step)), opt_(opt) {}

  /// Winding number of f around the boundary of r.
  int winding(const Rect& r) {
    const std::array<complex, 5> corners = {complex(r.re0, r.im0), complex(r.re1, r.im0),
                                            complex(r.re1, r.im1), complex(r.re0, r.im1),
                                            complex(r.re0, r.im0)};
    double total = 0.0;
    for (int e = 0; e < 4; ++e) {
      const complex a = corners[e], b = corners[e + 1];
      complex prev = value(a);
      for (int i = 1; i <= opt_.edge_points; ++i) {
        const complex z = a + (b - a) * (static_cast<double>(i) / opt_.edge_points);
        const complex cur = value(z);
        total += arg_change(a + (b - a) * (static_cast<double>(i - 1) / opt_.edge_points), prev, z, cur, 0);
        prev = cur;
      }
    }
    const double w = total / (2.0 * std::numbers::pi);
    const double rounded = std::round(w);
    if (std::abs(w - rounded) > 0.05)
      throw contour_too_close("winding number did not settle to an integer");
    return static_cast<int>(rounded);
  }

  /// All zeros inside r. Each contour is retried once, slightly enlarged,
  /// when it passes too close to a zero.
  std::vector<ComplexRoot> find(const Rect& r) {
    base_size_ = r.size();
    std::vector<ComplexRoot> out;
    search(r, 0, out);
    return out;
  }

private:
  complex value(complex z) {
    const auto [v, scale] = f_(z);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw contour_too_close("characteristic function not finite on the contour");
    if (std::abs(v) <= 1e-10 * std::max(scale, 1e-300))
      throw contour_too_close("contour passes too close to a zero");
    return v;
  }

  double arg_change(complex za, complex fa, complex zb, complex fb, int depth) {
    const double d = std::arg(fb / fa);
    const complex zm = 0.5 * (za + zb);
    bool near_pole = false;
    if (opt_.pole_distance) {
      const double len = std::abs(zb - za);
      near_pole = len * (2.0 * opt_.pole_order + 0.5) > opt_.pole_distance(zm);
    }
    if ((std::abs(d) <= std::numbers::pi / 4 && !near_pole) || depth > 60)
      return d;
    const complex fm = value(zm);
    return arg_change(za, fa, zm, fm, depth + 1) + arg_change(zm, fm, zb, fb, depth + 1);
  }

  int robust_winding(Rect& r) {
    try {
      return winding(r);
    } catch (const contour_too_close&) {
    } catch (const guard_violation&) {
    }
    const double dx = 3.7e-3 * (r.re1 - r.re0), dy = 3.7e-3 * (r.im1 - r.im0);
    r = {r.re0 - dx, r.re1 + dx, r.im0 - dy, r.im1 + dy};
    try {
      return winding(r);
    } catch (const guard_violation& e) {
      throw contour_too_close(std::string("contour meets a guarded point after perturbation: ") + e.what());
    }
  }

  std::optional<ComplexRoot> newton(const Rect& r, int w) {
    complex z = r.center();
    double step = 0.0;
    for (int it = 0; it < opt_.newton_iterations; ++it) {
      complex dz;
      try {
        dz = step_(z);
      } catch (const error&) {
        return std::nullopt;
      }
      if (!std::isfinite(dz.real()) || !std::isfinite(dz.imag()))
        return std::nullopt;
      z -= dz;
      step = std::abs(dz);
      if (step <= opt_.newton_tol * std::max(1.0, std::abs(z)))
        break;
    }
    if (!r.contains(z, 0.25 * r.size()))
      return std::nullopt;
    return ComplexRoot{z, w, step};
  }

  void search(Rect r, int depth, std::vector<ComplexRoot>& out) {
    const int w = robust_winding(r);
    if (w <= 0)
      return;
    const bool small = depth >= opt_.max_depth || r.size() <= opt_.min_rel_size * base_size_;
    if (w == 1 || small) {
      if (auto root = newton(r, w)) {
        if (r.contains(root->lambda, 1e-12 * std::max(1.0, std::abs(root->lambda))) || small) {
          out.push_back(*root);
          return;
        }
      }
      if (small) {
        out.push_back({r.center(), w, r.size()});
        return;
      }
    }
    for (double frac : {0.4871, 0.5213}) {
      const double xm = r.re0 + frac * (r.re1 - r.re0);
      const double ym = r.im0 + (1.0 - frac) * (r.im1 - r.im0);
      const std::array<Rect, 4> cells = {Rect{r.re0, xm, r.im0, ym}, Rect{xm, r.re1, r.im0, ym},
                                         Rect{r.re0, xm, ym, r.im1}, Rect{xm, r.re1, ym, r.im1}};
      std::vector<int> counts;
      int sum = 0;
      try {
        for (const auto& c : cells) {
          counts.push_back(winding(c));
          sum += counts.back();
        }
      } catch (const contour_too_close&) {
        continue;
      } catch (const guard_violation&) {
        continue;
      }
      if (sum != w)
        continue;
      for (std::size_t i = 0; i < cells.size(); ++i)
        if (counts[i] > 0)
          search(cells[i], depth + 1, out);
      return;
    }
    throw contour_too_close("could not subdivide a cell without touching a zero");
  }

  Fn f_;
  Step step_;
  ContourOptions opt_;
  double base_size_ = 1.0;
};

} // namespace padic_spectra

#endif // PADIC_SPECTRA_ROOTS_HPP
