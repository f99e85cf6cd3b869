// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "oracles.hpp"

using namespace padic_spectra;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    if (!pass)
      return;
    pass = false;
    detail.str("");
    detail << why;
  }
};

std::string g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

WaveletIndex random_index(oracle::Rng& rng, const PrimeContext& ctx, long nmax, long depth) {
  const long n = rng.integer(-nmax, nmax);
  const auto j = static_cast<unsigned long>(rng.integer(1, static_cast<long>(ctx.prime()) - 1));
  std::vector<unsigned long> digits;
  for (long i = rng.integer(0, depth); i > 0; --i)
    digits.push_back(static_cast<unsigned long>(rng.integer(0, static_cast<long>(ctx.prime()) - 1)));
  while (!digits.empty() && digits.back() == 0)
    digits.pop_back();
  return {n, j, CosetEpsilon(digits, ctx)};
}

WaveletSum single(const PrimeContext& ctx, const WaveletIndex& idx) {
  WaveletSum w(ctx);
  w.add(idx, 1.0);
  return w;
}

std::vector<PAdicRational> pair_at(const PrimeContext& ctx, long gamma) {
  return {PAdicRational(ctx, 0), PAdicRational(ctx, mpq_class(1)).scaled(-gamma)};
}

// ---------------------------------------------------------------------------

void ultrametric(Verdict& v) {
  oracle::Rng rng(1001);
  double worst_char = 0;
  for (unsigned long p : {2ul, 3ul, 5ul}) {
    const PrimeContext ctx(p);
    for (int i = 0; i < 10000; ++i) {
      const PAdicRational x = rng.padic(ctx), y = rng.padic(ctx);
      const mpq_class nx = oracle::norm_exact(x.value(), p), ny = oracle::norm_exact(y.value(), p);
      if (oracle::norm_exact((x * y).value(), p) != nx * ny || std::abs(x.norm() - nx.get_d()) > 1e-15 * x.norm())
        return v.fail("norm not multiplicative at p=" + std::to_string(p));
      const mpq_class ns = oracle::norm_exact((x + y).value(), p);
      if (ns > std::max(nx, ny) || (nx != ny && ns != std::max(nx, ny)))
        return v.fail("strong triangle fails at p=" + std::to_string(p));
      worst_char = std::max(worst_char, std::abs((x + y).character() - x.character() * y.character()));
      worst_char = std::max(worst_char, std::abs(x.character() - oracle::character(x.value(), p)));
    }
  }
  if (worst_char > 1e-12)
    return v.fail("character defect " + g(worst_char));
  v.detail << "3x10^4 pairs exact; character defect " << g(worst_char);
}

void orthonormality(Verdict& v) {
  oracle::Rng rng(1002);
  double worst = 0;
  for (unsigned long p : {2ul, 3ul, 5ul}) {
    const PrimeContext ctx(p);
    std::set<WaveletIndex> chosen;
    while (chosen.size() < 50)
      chosen.insert(random_index(rng, ctx, 3, 3));
    std::vector<StepFunction> fs;
    for (const auto& idx : chosen)
      fs.push_back(to_step_function(single(ctx, idx)));
    for (std::size_t a = 0; a < fs.size(); ++a)
      for (std::size_t b = 0; b < fs.size(); ++b)
        worst = std::max(worst, std::abs(inner_product(fs[a], fs[b]) - (a == b ? 1.0 : 0.0)));
  }
  if (worst > 1e-12)
    return v.fail("Gram deviation " + g(worst));
  v.detail << "50 wavelets per p in {2,3,5}; max |G - I| = " << g(worst);
}

void eigen_relation(Verdict& v) {
  oracle::Rng rng(1003);
  double worst = 0;
  for (unsigned long p : {2ul, 3ul, 5ul}) {
    const PrimeContext ctx(p);
    for (int i = 0; i < 20; ++i) {
      const WaveletIndex idx = random_index(rng, ctx, 3, 3);
      const StepFunction ft = fourier(to_step_function(single(ctx, idx)));
      // Every piece of the transform is a ball inside the sphere of radius
      // p^{1-N}; read the radius off the pieces.
      std::optional<long> sphere;
      for (const auto& t : ft.terms()) {
        const long c = *t.ball.center.valuation();
        if (t.ball.radius >= -c)
          return v.fail("transform piece reaches outside a sphere");
        if (sphere && *sphere != -c)
          return v.fail("transform pieces on different spheres");
        sphere = -c;
      }
      if (!sphere || *sphere != 1 - idx.n)
        return v.fail("transform not on |xi| = p^{1-N}");
      // Off the sphere the transform vanishes; on it it does not vanish identically.
      for (long k : {idx.n - 3, idx.n - 2, idx.n, idx.n + 1}) {
        const PAdicRational xi = PAdicRational(ctx, rng.integer(1, 1000) * static_cast<long>(p) + 1).scaled(k);
        worst = std::max(worst, std::abs(ft(xi)));
      }
      for (double alpha : {1.5, 2.0, 3.0}) {
        const double symbol = std::pow(ctx.pow(static_cast<double>(*sphere)), alpha);
        const complex c = apply_dalpha(single(ctx, idx), alpha).coefficient(idx);
        worst = std::max(worst, std::abs(c - symbol) / symbol);
        worst = std::max(worst, std::abs(dalpha_eigenvalue(ctx, alpha, idx.n) - symbol) / symbol);
      }
    }
  }
  if (worst > 1e-12)
    return v.fail("defect " + g(worst));
  v.detail << "20 wavelets per p; alpha in {1.5,2,3}; max defect " << g(worst);
}

void green_consistency(Verdict& v) {
  oracle::Rng rng(1004);
  const PrimeContext ctx(3);
  const double alpha = 2.0;
  const MSeries m(ctx, alpha);
  double worst_ratio = 0;
  for (int c = 0; c < 5; ++c) {
    const PAdicRational xk = rng.padic(ctx, 2, 50);
    double lambda = c % 2 ? -std::exp(rng.uniform(-2, 2)) : m.pole(rng.integer(-1, 1)) * rng.uniform(1.2, 7.5);
    if (m.guarded_pole(lambda, -100, 100))
      lambda *= 1.1;
    const auto [lo, hi] = default_window(ctx, alpha, lambda, 1e-6);
    const auto hc = h_coefficients(xk, lambda, alpha, lo, hi);
    for (int k = 0; k < 10; ++k) {
      const PAdicRational x = k == 0 ? xk : xk + rng.padic(ctx, 3, 50);
      const auto radial = eval_h(m, xk, lambda, x);
      const double diff = std::abs(radial.value - evaluate(hc.coefficients, x));
      const double bound = hc.tail.pointwise + radial.error_bound;
      worst_ratio = std::max(worst_ratio, diff / bound);
      if (diff > bound)
        return v.fail("radial/series gap " + g(diff) + " over bound " + g(bound));
    }
    const auto norm = h_norm_sq(m, lambda);
    const auto mp = m.m0_prime(lambda);
    const auto brute = oracle::brute_m0_prime(3, alpha, lambda);
    const double gap = norm.real() - hc.coefficients.norm_sq();
    if (gap < -norm.error_bound - 1e-12 || gap > hc.tail.norm_sq + norm.error_bound + 1e-12)
      return v.fail("norm^2 outside window + tail");
    if (std::abs(norm.real() - mp.real()) > 0 ||
        std::abs(mp.real() - brute.value) > mp.error_bound + brute.radius + 1e-12 * std::abs(brute.value))
      return v.fail("norm^2 != M0'");
  }
  v.detail << "5 (x_k, lambda) x 10 points; worst gap/bound " << g(worst_ratio);
}

void sphere_sum(Verdict& v) {
  oracle::Rng rng(1005);
  double worst = 0;
  for (unsigned long p : {2ul, 3ul, 5ul, 7ul}) {
    const PrimeContext ctx(p);
    int done = 0;
    while (done < 100) {
      const PAdicRational xk = rng.padic(ctx), x = rng.padic(ctx);
      if (x == xk)
        continue;
      ++done;
      worst = std::max(worst, std::abs(character_sphere_sum(x, xk) + 1.0));
      // Direct sum with the search-based character.
      const long gamma = *distance_exponent(x, xk);
      complex s = 0;
      for (unsigned long j = 1; j < p; ++j)
        s += oracle::character(mpq_class((x - xk).scaled(gamma - 1).value() * j), p);
      worst = std::max(worst, std::abs(s + 1.0));
    }
  }
  if (worst > 1e-12)
    return v.fail("deviation " + g(worst));
  v.detail << "100 points per p in {2,3,5,7}; max |S + 1| = " << g(worst);
}

void scaling_identity(Verdict& v) {
  const unsigned long p = 2;
  const double alpha = 2.0;
  const MSeries m(PrimeContext(p), alpha);
  const double f = std::pow(2.0, alpha - 1.0);
  double worst = 0;
  int checked = 0;
  for (int i = 0; i < 100; ++i) {
    const double lambda = std::pow(2.0, alpha * (-3.0 + 6.0 * (i + 0.5) / 100.0));
    const auto lhs = m.m0(m.pole(1) * lambda), rhs = m.m0(lambda);
    const double d = std::abs(f * lhs.real() - rhs.real());
    const double bound = f * lhs.error_bound + rhs.error_bound;
    worst = std::max(worst, d / bound);
    if (d > bound)
      return v.fail("identity off by " + g(d) + " at lambda=" + g(lambda));
    ++checked;
  }
  v.detail << checked << " points over 6 intervals; worst gap/bound " << g(worst);
}

void friedrichs_law(Verdict& v) {
  const PrimeContext ctx(2);
  const double alpha = 2.0;
  for (long gamma : {-1L, 0L, 1L}) {
    const auto s = friedrichs_spectrum(ctx, alpha, gamma, -4, 4);
    for (long n = -4; n <= 4; ++n) {
      const auto t1 = s.in_interval(n, true), t2 = s.in_interval(n, false);
      if (n < -gamma && (t1.size() + t2.size() != 1))
        return v.fail("gamma=" + std::to_string(gamma) + " N=" + std::to_string(n) + ": not one root");
      if (n >= 1 - gamma && (t1.size() != 1 || t2.size() != 1 || !(t2[0] < t1[0])))
        return v.fail("gamma=" + std::to_string(gamma) + " N=" + std::to_string(n) + ": not two ordered roots");
    }
    if (recover_gamma_min(s) != gamma)
      return v.fail("gamma_min from the type-1 onset is " + std::to_string(recover_gamma_min(s)));

    // Determinant route on actual points.
    const auto y = pair_at(ctx, gamma);
    RealSpectrumOptions opt;
    opt.n_lo = -4;
    opt.n_hi = 4;
    opt.negative_axis = true;
    const auto hard = friedrichs_roots(ctx, alpha, y, opt);
    std::vector<double> model;
    for (const auto& r : s.type1)
      model.push_back(r.lambda);
    for (const auto& r : s.type2)
      model.push_back(r.lambda);
    std::sort(model.begin(), model.end());
    if (hard.size() != model.size())
      return v.fail("determinant scan finds " + std::to_string(hard.size()) + " roots, model " +
                    std::to_string(model.size()));
    for (std::size_t i = 0; i < model.size(); ++i)
      if (std::abs(hard[i].record.lambda.real() - model[i]) > 1e-9 * model[i])
        return v.fail("determinant scan and model disagree");
    if (recover_gamma_min(hard, opt.n_lo) != gamma)
      return v.fail("gamma_min from antisymmetric null vectors differs");
  }
  v.detail << "gamma in {-1,0,1}, N in [-4,4]; counts, order and gamma_min exact on both routes";
}

void one_point(Verdict& v) {
  const PrimeContext ctx(2);
  const double alpha = 2.0;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, std::vector<OnePointEigenvalue>>> all;
  double worst_rec = 0, worst_cert = 0, closest = inf;
  for (double b : {-2.0, -0.5, 0.5, 2.0, inf}) {
    const auto roots = one_point_eigenvalues(ctx, alpha, b, -3, 3);
    std::map<long, int> per;
    int negative = 0;
    for (const auto& r : roots)
      r.interval ? ++per[*r.interval] : ++negative;
    for (long n = -3; n <= 3; ++n)
      if (per[n] != 1)
        return v.fail("b=" + g(b) + ": " + std::to_string(per[n]) + " roots in N=" + std::to_string(n));
    if ((negative == 1) != (b < 0) || negative > 1)
      return v.fail("b=" + g(b) + ": negative eigenvalue count " + std::to_string(negative));
    // Operator route.
    if (!std::isinf(b)) {
      Matrix bm(1, 1);
      bm(0, 0) = b;
      RealSpectrumOptions opt;
      opt.n_lo = -3;
      opt.n_hi = 3;
      opt.negative_axis = true;
      const auto scan = find_real_eigenvalues(RealizationConfig(ctx, alpha, {PAdicRational(ctx, 0)}, bm), opt);
      if (scan.size() != roots.size())
        return v.fail("b=" + g(b) + ": determinant scan count differs");
      for (std::size_t i = 0; i < roots.size(); ++i)
        if (std::abs(scan[i].lambda.real() - roots[i].lambda) > 1e-9 * std::abs(roots[i].lambda))
          return v.fail("b=" + g(b) + ": determinant scan disagrees");
      for (const auto& r : roots) {
        if (!r.interval)
          continue;
        const double mu = r.lambda / std::pow(2.0, alpha);
        const auto brute = oracle::brute_m0(2, alpha, mu);
        const double want = std::pow(2.0, alpha - 1.0) * (-1.0 / b);
        worst_cert = std::max(worst_cert, std::abs(brute.value - want));
        if (std::abs(brute.value - want) > 1e-8 + brute.radius || std::abs(want + 1.0 / b) < 1e-3)
          return v.fail("b=" + g(b) + ": homogeneity certificate fails");
      }
      const auto rep = homogeneity_check(ctx, alpha, b, 0);
      if (rep.homogeneous)
        return v.fail("b=" + g(b) + " reported homogeneous");
    } else {
      for (std::size_t i = 0; i + 1 < roots.size(); ++i)
        worst_rec = std::max(worst_rec, std::abs(roots[i + 1].lambda / (4.0 * roots[i].lambda) - 1.0));
      if (worst_rec > 1e-9)
        return v.fail("recurrence off by " + g(worst_rec));
      if (!homogeneity_check(ctx, alpha, b, 0).homogeneous)
        return v.fail("hard condition not homogeneous");
    }
    for (const auto& [b2, other] : all)
      for (const auto& x : roots)
        for (const auto& y : other)
          closest = std::min(closest, std::abs(x.lambda - y.lambda) / std::abs(x.lambda));
    all.emplace_back(b, roots);
  }
  if (!(closest > 1e-8))
    return v.fail("spectra for distinct b within " + g(closest));
  v.detail << "recurrence " << g(worst_rec) << ", certificate " << g(worst_cert) << ", closest pair "
           << g(closest);
}

void krein_resolvent(Verdict& v) {
  oracle::Rng rng(1009);
  double worst_bc = 0, worst_def = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const unsigned long p = trial % 3 == 0 ? 3 : 2;
    const PrimeContext ctx(p);
    const MSeries m(ctx, 2.0);
    const Eigen::Index n = 1 + trial % 3;
    std::vector<PAdicRational> y;
    while (static_cast<Eigen::Index>(y.size()) < n) {
      const PAdicRational x = rng.padic(ctx, 2, 10);
      if (std::find(y.begin(), y.end(), x) == y.end())
        y.push_back(x);
    }
    Matrix a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        a(i, j) = complex(rng.uniform(-2, 2), rng.uniform(-2, 2));
    const RealizationConfig cfg(ctx, 2.0, y, 0.5 * (a + a.adjoint()));
    WaveletSum f(ctx);
    for (int k = 0; k < 6; ++k) {
      const long lev = rng.integer(-2, 2);
      const PAdicRational& anchor =
          k % 2 ? y[static_cast<std::size_t>(rng.integer(0, n - 1))] : rng.padic(ctx, 2, 10);
      f.add(WaveletIndex{lev, static_cast<unsigned long>(rng.integer(1, static_cast<long>(p) - 1)),
                         coset_rep(lev, anchor)},
            complex(rng.uniform(-1, 1), rng.uniform(-1, 1)));
    }
    const complex lambda(rng.uniform(-3, 3), rng.uniform(0.1, 1.0));
    const auto r = resolvent_apply(cfg, lambda, f);
    // Boundary values recomputed by radial evaluation of R f.
    Vector g0(n);
    for (Eigen::Index i = 0; i < n; ++i)
      g0(i) = evaluate(m, r.diagonal, r.green, y[static_cast<std::size_t>(i)]);
    worst_bc = std::max({worst_bc, (cfg.B * g0 - r.gamma1).norm(), (cfg.B * r.gamma0 - r.gamma1).norm()});
    worst_def = std::max(worst_def, std::sqrt(windowed_defect(cfg, r, f, -6, 6).norm_sq()));
  }
  if (worst_bc > 1e-8)
    return v.fail("boundary residual " + g(worst_bc));
  if (worst_def > 1e-12)
    return v.fail("window defect " + g(worst_def));
  v.detail << "10 configs; boundary residual " << g(worst_bc) << ", window defect " << g(worst_def);
}

void parity_model(Verdict& v) {
  const double alpha = 2.0;
  int roots_checked = 0;
  for (unsigned long p : {2ul, 3ul}) {
    const PrimeContext ctx(p);
    for (long gamma : {-1L, 0L, 1L})
      for (auto [a, b] : {std::pair{0.3, 0.4}, std::pair{0.6, 0.9}, std::pair{-0.5, 0.2}}) {
        const long lo = -4, hi = 2;
        const auto r = pt_two_point_real_eigenvalues(ctx, alpha, gamma, a, b, lo, hi);
        if (r.negative != 0)
          return v.fail("negative root for p=" + std::to_string(p) + " gamma=" + std::to_string(gamma));
        const auto fr = friedrichs_spectrum(ctx, alpha, gamma, lo, hi);
        for (long n = lo; n < std::min(-gamma, hi + 1); ++n) {
          const auto plus = fr.in_interval(n, false);
          int found = 0;
          for (const auto& e : r.roots) {
            if (e.interval != n)
              continue;
            ++found;
            const double l = e.lambda.real();
            if (plus.size() != 1 || !(ctx.pow(alpha * n) < l && l < plus[0]))
              return v.fail("bracket fails at N=" + std::to_string(n));
          }
          if (found == 0)
            return v.fail("no root in N=" + std::to_string(n) + " < -gamma");
          roots_checked += found;
        }
        // The point configuration x_2 = -x_1, |x_1 - x_2| = p^gamma.
        const PAdicRational x1 = PAdicRational(ctx, 1).scaled(p == 2 ? -gamma - 1 : -gamma);
        const std::vector<PAdicRational> y{x1, -x1};
        if (*distance_exponent(y[0], y[1]) != gamma)
          return v.fail("point construction");
        Matrix binv(2, 2);
        binv << complex(0, -a), b, -b, complex(0, a);
        const RealizationConfig cfg(ctx, alpha, y, binv.inverse(), eta_matrix_parity(y));
        if (classify_realization(cfg, true) != Realization::eta_self_adjoint)
          return v.fail("configuration not classified eta-self-adjoint");
        if (is_hermitian(cfg.B))
          return v.fail("parity configuration unexpectedly Hermitian");
        RealSpectrumOptions opt;
        opt.n_lo = lo;
        opt.n_hi = hi;
        opt.negative_axis = true;
        for (const auto& e : find_real_eigenvalues(cfg, opt))
          if (e.negative_axis)
            return v.fail("determinant scan finds a negative root");
      }
  }
  v.detail << roots_checked << " roots bracketed; negative axis empty on both routes; eta-self-adjoint";
}

void diff_at_zero(Verdict& v) {
  const MSeries m(PrimeContext(2), 2.0);
  const auto d = m.diff(0, 0.0);
  const auto brute = oracle::brute_diff(2, 2.0, 0, 0.0);
  const double closed = std::pow(2.0, (1.0 - 2.0) * (1.0 - 0.0));
  if (std::abs(d.real() - 0.75) > 1e-12)
    return v.fail("series gives " + g(d.real()));
  if (std::abs(brute.value - 0.75) > 1e-12)
    return v.fail("brute force gives " + g(brute.value));
  const bool flagged = std::abs(closed - d.real()) > 1e-12;
  if (!flagged)
    return v.fail("closed form unexpectedly matches");
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "series %.15f, brute force %.15f; closed form p^{(1-alpha)(1-gamma)} = %.2f does NOT match",
                d.real(), brute.value, closed);
  v.detail << buf;
}

} // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Verdict&)>>> criteria{
      {"ultrametric and character axioms", ultrametric},
      {"wavelet orthonormality", orthonormality},
      {"wavelet eigenvalue relation", eigen_relation},
      {"Green's function consistency", green_consistency},
      {"character sphere sum", sphere_sum},
      {"M0 scaling identity", scaling_identity},
      {"hard two-point root law", friedrichs_law},
      {"one-point model", one_point},
      {"Krein resolvent", krein_resolvent},
      {"parity two-point model", parity_model},
      {"M0 - M1 at zero", diff_at_zero},
  };
  int failed = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      criteria[i].second(v);
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    failed += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first << ": "
              << v.detail.str() << std::endl;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria passed in " << g(secs) << " s"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
