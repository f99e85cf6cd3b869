#ifndef PADIC_SPECTRA_TOOLS_CLI_HPP
#define PADIC_SPECTRA_TOOLS_CLI_HPP

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "padic_spectra/json_io.hpp"
#include "padic_spectra/padic_spectra.hpp"

namespace padic_spectra::cli {

namespace detail {

using json_io::json;

inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::pair<long, long> parse_window(const std::string& text) {
  const std::string s = json_io::normalize_minus(text);
  const auto colon = s.find(':');
  try {
    if (colon == std::string::npos)
      throw std::invalid_argument(s);
    std::size_t a = 0, b = 0;
    const long lo = std::stol(s.substr(0, colon), &a);
    const long hi = std::stol(s.substr(colon + 1), &b);
    if (a != colon || b != s.size() - colon - 1)
      throw std::invalid_argument(s);
    if (lo > hi)
      throw validation_error("empty window '" + text + "'");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw validation_error("window must be N_lo:N_hi, got '" + text + "'");
  }
}

inline std::vector<double> parse_reals(const std::string& text, std::size_t count, const char* what) {
  std::vector<double> out;
  std::stringstream ss(json_io::normalize_minus(text));
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size())
        throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw validation_error(std::string("malformed ") + what + " '" + text + "'");
    }
  }
  if (out.size() != count)
    throw validation_error(std::string("malformed ") + what + " '" + text + "'");
  return out;
}

/// "inf" or a real.
inline double parse_coupling(const std::string& text) {
  const std::string s = json_io::normalize_minus(text);
  if (s == "inf" || s == "+inf" || s == "infinity")
    return std::numeric_limits<double>::infinity();
  return parse_reals(s, 1, "coupling")[0];
}

inline complex parse_lambda(const std::string& text) {
  return json_io::parse_complex(json_io::parse_text(text));
}

/// Options shared by all computing subcommands.
struct Common {
  unsigned long p = 2;
  double alpha = 2.0;
  double tol = default_series_tol;
  double root_tol = 1e-10;
  std::string out = "-";

  void attach(CLI::App* sub, bool with_field = true) {
    if (with_field) {
      sub->add_option("--p", p, "prime")->required();
      sub->add_option("--alpha", alpha, "order of D^alpha")->required();
    }
    sub->add_option("--tol", tol, "series tolerance")->capture_default_str();
    sub->add_option("--root-tol", root_tol, "relative root tolerance")->capture_default_str();
    sub->add_option("--out", out, "output file, '-' for stdout")->capture_default_str();
  }

  json_io::RunManifest manifest(std::string command, json params) const {
    json_io::RunManifest m;
    m.command = std::move(command);
    params["p"] = p;
    params["alpha"] = alpha;
    m.parameters = std::move(params);
    m.series_tol = tol;
    m.root_tol = root_tol;
    m.output = out;
    return m;
  }
};

inline void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw validation_error("cannot open output file '" + path + "'");
  f << text;
}

inline std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f)
    throw validation_error("cannot read '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline std::optional<Matrix> eta_for(const std::string& mode, const std::vector<PAdicRational>& pts) {
  if (mode == "parity")
    return eta_matrix_parity(pts);
  if (mode == "none")
    return std::nullopt;
  throw validation_error("--eta must be parity or none");
}

// ---- mfunc ----------------------------------------------------------------

struct MfuncArgs {
  std::optional<long> gamma;
  std::string lambda;
  std::string grid;
  bool diff = false, sum = false, derivative = false;
};

inline int run_mfunc(const Common& c, const MfuncArgs& a, std::ostream& out) {
  if (a.lambda.empty() == a.grid.empty())
    throw validation_error("give exactly one of --lambda and --grid");
  if (a.diff && a.sum)
    throw validation_error("--diff and --sum exclude each other");
  if (a.derivative && (a.diff || a.sum))
    throw validation_error("--derivative applies to M_0 and M_{p^gamma} only");
  const PrimeContext ctx(c.p);
  const MSeries m(ctx, c.alpha);
  const long gamma = a.gamma.value_or(0);
  std::string name = "M0";
  std::function<MEvaluation(complex)> f = [&](complex l) { return m.m0(l, c.tol); };
  if (a.diff) {
    name = "M0-Mgamma";
    f = [&](complex l) { return m.diff(gamma, l, c.tol); };
  } else if (a.sum) {
    name = "M0+Mgamma";
    f = [&](complex l) { return m.sum(gamma, l, c.tol); };
  } else if (a.gamma) {
    name = a.derivative ? "Mgamma'" : "Mgamma";
    f = a.derivative ? std::function<MEvaluation(complex)>([&](complex l) { return m.m_gamma_prime(gamma, l, c.tol); })
                     : std::function<MEvaluation(complex)>([&](complex l) { return m.m_gamma(gamma, l, c.tol); });
  } else if (a.derivative) {
    name = "M0'";
    f = [&](complex l) { return m.m0_prime(l, c.tol); };
  }

  json params = {{"function", name}};
  if (a.gamma)
    params["gamma"] = *a.gamma;
  std::vector<complex> lambdas;
  if (!a.lambda.empty()) {
    lambdas.push_back(parse_lambda(a.lambda));
    params["lambda"] = json_io::cplx(lambdas[0]);
  } else {
    const auto g = parse_reals(a.grid, 3, "grid lo:hi:count");
    const double count = g[2];
    if (!(count >= 1) || count != std::floor(count) || count > 1e6)
      throw validation_error("grid count must be a positive integer");
    for (long i = 0; i < static_cast<long>(count); ++i)
      lambdas.emplace_back(count == 1 ? g[0] : g[0] + (g[1] - g[0]) * static_cast<double>(i) / (count - 1), 0.0);
    params["grid"] = {g[0], g[1], static_cast<long>(count)};
  }

  std::ostringstream csv;
  csv << "# " << c.manifest("mfunc", params).to_json().dump() << "\n";
  csv << "lambda_re,lambda_im,value_re,value_im,bound,status\n";
  for (const complex l : lambdas) {
    csv << fmt(l.real()) << "," << fmt(l.imag()) << ",";
    try {
      const auto e = f(l);
      csv << fmt(e.value.real()) << "," << fmt(e.value.imag()) << "," << fmt(e.error_bound) << ",ok\n";
    } catch (const guard_violation&) {
      // A single point is refused outright; on a grid the row is marked.
      if (lambdas.size() == 1)
        throw;
      csv << "nan,nan,nan,guard\n";
    }
  }
  emit(csv.str(), c.out, out);
  return 0;
}

// ---- greens ---------------------------------------------------------------

struct GreensArgs {
  std::string center = "0";
  std::string lambda;
  std::string at;
  std::string window;
};

inline int run_greens(const Common& c, const GreensArgs& a, std::ostream& out) {
  const PrimeContext ctx(c.p);
  const MSeries m(ctx, c.alpha);
  const auto xk = PAdicRational::parse(ctx, json_io::normalize_minus(a.center));
  const complex l = parse_lambda(a.lambda);
  const auto xs = json_io::parse_points(ctx, a.at);
  const auto [lo, hi] = a.window.empty() ? default_window(ctx, c.alpha, l, std::sqrt(c.tol)) : parse_window(a.window);
  const auto h = h_coefficients(xk, l, c.alpha, lo, hi);

  json values = json::array();
  for (const auto& x : xs) {
    const auto radial = eval_h(m, xk, l, x, c.tol);
    const complex series = evaluate(h.coefficients, x);
    values.push_back({{"x", x.to_string()},
                      {"radial", json_io::to_json(radial)},
                      {"series", json_io::cplx(series)},
                      {"series_tail_bound", json_io::real(h.tail.pointwise)},
                      {"difference", json_io::real(std::abs(radial.value - series))}});
  }
  json params = {{"center", xk.to_string()}, {"lambda", json_io::cplx(l)}, {"at", json_io::points_json(xs)},
                 {"window", {lo, hi}}};
  json doc = {{"manifest", c.manifest("greens", params).to_json()},
              {"values", values},
              {"norm_sq", json_io::to_json(h_norm_sq(m, l, c.tol))},
              {"window_norm_sq", h.coefficients.norm_sq()},
              {"tail_norm_sq", json_io::real(h.tail.norm_sq)}};
  emit(dump(doc), c.out, out);
  return 0;
}

// ---- spectrum / resolvent -------------------------------------------------

struct ConfigArgs {
  std::string points;
  std::string B;
  std::string eta = "none";

  RealizationConfig build(const Common& c) const {
    const PrimeContext ctx(c.p);
    auto pts = json_io::parse_points(ctx, points);
    auto eta_m = eta_for(eta, pts);
    return RealizationConfig(ctx, c.alpha, std::move(pts), json_io::parse_matrix(json_io::parse_text(B)),
                             std::move(eta_m));
  }

  json params() const {
    return {{"points", points}, {"B", json_io::parse_text(B)}, {"eta", eta}};
  }
};

struct SpectrumArgs {
  ConfigArgs cfg;
  std::string window = "-3:3";
  bool negative_axis = false;
  std::string rect;
};

inline int run_spectrum(const Common& c, const SpectrumArgs& a, std::ostream& out) {
  const auto cfg = a.cfg.build(c);
  const auto [lo, hi] = parse_window(a.window);
  json params = a.cfg.params();
  params["window"] = {lo, hi};
  params["negative_axis"] = a.negative_axis;
  const Realization kind = classify_realization(cfg);
  json doc = {{"manifest", nullptr},
              {"realization", to_string(kind)},
              {"singular_B", cfg.singular_B()}};
  if (!a.rect.empty()) {
    const auto r = parse_reals(a.rect, 4, "rectangle re0:re1:im0:im1");
    params["rect"] = r;
    doc["eigenvalues"] = json_io::to_json(find_complex_eigenvalues(cfg, Rect{r[0], r[1], r[2], r[3]}, {}, c.tol));
  } else {
    RealSpectrumOptions opt;
    opt.n_lo = lo;
    opt.n_hi = hi;
    opt.negative_axis = a.negative_axis;
    opt.scan.root_rel_tol = c.root_tol;
    doc["eigenvalues"] = json_io::to_json(find_real_eigenvalues(cfg, opt, c.tol));
  }
  doc["manifest"] = c.manifest("spectrum", params).to_json();
  emit(dump(doc), c.out, out);
  return 0;
}

struct ResolventArgs {
  ConfigArgs cfg;
  std::string lambda;
  std::string input;
  std::string window;
};

inline int run_resolvent(const Common& c, const ResolventArgs& a, std::ostream& out) {
  const auto cfg = a.cfg.build(c);
  const complex l = parse_lambda(a.lambda);
  const WaveletSum f = json_io::parse_wavelet_sum(cfg.ctx, json_io::parse_text(read_file(a.input)));
  const auto r = resolvent_apply(cfg, l, f, c.tol);
  long lo, hi;
  if (!a.window.empty()) {
    std::tie(lo, hi) = parse_window(a.window);
  } else {
    std::tie(lo, hi) = f.empty() ? std::pair{-3L, 3L} : f.scale_range();
    lo -= 2;
    hi += 2;
  }
  const WaveletSum defect = windowed_defect(cfg, r, f, lo, hi);
  json params = a.cfg.params();
  params["lambda"] = json_io::cplx(l);
  params["input"] = a.input;
  params["window"] = {lo, hi};
  json doc = {{"manifest", c.manifest("resolvent", params).to_json()},
              {"result", json_io::to_json(r)},
              {"boundary_residual", (cfg.B * r.gamma0 - r.gamma1).norm()},
              {"window_defect", std::sqrt(defect.norm_sq())}};
  emit(dump(doc), c.out, out);
  return 0;
}

// ---- model ----------------------------------------------------------------

struct ModelArgs {
  std::string preset;
  long gamma = 0;
  std::string a = "0";
  std::string b = "0";
  std::string window = "-3:3";
  std::string trace;
  int trace_points = 64;
  std::optional<long> sweep;
};

/// det(M(l) + B^{-1}) of the preset, written as "lambda value" rows with a
/// blank line between intervals.
inline std::string model_trace(const PrimeContext& ctx, double alpha, const ModelArgs& a, double av, double bv,
                               long lo, long hi, double tol) {
  const MSeries m(ctx, alpha);
  std::function<double(double)> det;
  if (a.preset == "onepoint")
    det = [&](double l) { return m.m0(l, tol).real() + (std::isinf(bv) ? 0.0 : 1.0 / bv); };
  else if (a.preset == "pt2")
    det = [&](double l) { return (m.diff(a.gamma, l, tol).value * m.sum(a.gamma, l, tol).value).real() + av * av + bv * bv; };
  else
    det = [&](double l) {
      return (m.diff(a.gamma, l, tol).real() + av - bv) * (m.sum(a.gamma, l, tol).real() + av + bv);
    };
  ScanOptions opt;
  opt.initial_points = a.trace_points;
  std::ostringstream os;
  os << "# lambda det(M(lambda) + B^-1)\n";
  for (long n = lo; n <= hi; ++n) {
    for (double l : interval_samples(ctx, alpha, n, opt)) {
      try {
        os << fmt(l) << " " << fmt(det(l)) << "\n";
      } catch (const guard_violation&) {
      }
    }
    os << "\n";
  }
  return os.str();
}

inline int run_model(const Common& c, const ModelArgs& a, std::ostream& out) {
  const PrimeContext ctx(c.p);
  const auto [lo, hi] = parse_window(a.window);
  const double av = parse_coupling(a.a), bv = parse_coupling(a.b);
  json params = {{"preset", a.preset}, {"window", {lo, hi}}};
  json result;
  if (a.preset == "friedrichs") {
    params["gamma"] = a.gamma;
    const auto s = friedrichs_spectrum(ctx, c.alpha, a.gamma, lo, hi, c.tol);
    result = json_io::to_json(s);
    try {
      result["gamma_min"] = recover_gamma_min(s);
    } catch (const validation_error&) {
      result["gamma_min"] = nullptr;
    }
  } else if (a.preset == "sym2") {
    if (!std::isfinite(av) || !std::isfinite(bv))
      throw validation_error("sym2 needs finite a and b");
    params.update({{"gamma", a.gamma}, {"a", av}, {"b", bv}});
    result = json_io::to_json(two_point_symmetric_spectrum(ctx, c.alpha, a.gamma, av, bv, lo, hi, c.tol, c.root_tol));
  } else if (a.preset == "pt2") {
    if (!std::isfinite(av) || !std::isfinite(bv))
      throw validation_error("pt2 needs finite a and b");
    params.update({{"gamma", a.gamma}, {"a", av}, {"b", bv}});
    ScanOptions scan;
    scan.root_rel_tol = c.root_tol;
    const auto r = pt_two_point_real_eigenvalues(ctx, c.alpha, a.gamma, av, bv, lo, hi, c.tol, scan);
    result = {{"roots", json_io::to_json(r.roots)},
              {"negative", r.negative},
              {"brackets_hold", r.brackets_hold},
              {"violations", r.violations}};
    if (a.sweep) {
      params["sweep"] = *a.sweep;
      const auto sw = pt_coupling_sweep(ctx, c.alpha, a.gamma, av, bv, *a.sweep, {1.0, 1e-1, 1e-2, 1e-3}, c.tol);
      json counts = json::array();
      for (const auto& [scale, k] : sw.counts)
        counts.push_back({{"scale", scale}, {"roots", k}});
      result["sweep"] = {{"interval", sw.interval}, {"counts", counts}, {"onset", json_io::optional_real(sw.onset)}};
    }
  } else if (a.preset == "onepoint") {
    params["b"] = json_io::real(bv);
    json roots = json::array();
    for (const auto& e : one_point_eigenvalues(ctx, c.alpha, bv, lo, hi, c.tol, c.root_tol))
      roots.push_back({{"interval", json_io::optional_long(e.interval)}, {"lambda", e.lambda}});
    result = {{"eigenvalues", roots}};
  } else {
    throw validation_error("unknown model preset '" + a.preset + "'");
  }
  if (!a.trace.empty()) {
    params["trace"] = a.trace;
    params["trace_points"] = a.trace_points;
    const std::string text = model_trace(ctx, c.alpha, a, av, bv, lo, hi, c.tol);
    if (a.trace == "-")
      throw validation_error("--trace needs a file path");
    emit("# " + c.manifest("model", params).to_json().dump() + "\n" + text, a.trace, out);
  }
  const json doc = {{"manifest", c.manifest("model", params).to_json()}, {"result", result}};
  emit(dump(doc), c.out, out);
  return 0;
}

// ---- selftest -------------------------------------------------------------

inline int run_selftest(std::ostream& out) {
  std::mt19937_64 rng(20240611);
  auto uniform = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  auto integer = [&](long a, long b) { return std::uniform_int_distribution<long>(a, b)(rng); };
  auto rational = [&](const PrimeContext& ctx) {
    long num = integer(-5000, 5000);
    if (num == 0)
      num = 1;
    const long k = integer(-3, 3);
    PAdicRational x(ctx, num, integer(1, 97));
    return x.scaled(k);
  };

  struct Check {
    std::string name;
    std::function<std::string()> run; // empty string on success
  };
  std::vector<Check> checks;

  checks.push_back({"ultrametric", [&]() -> std::string {
                      for (unsigned long p : {2ul, 3ul, 5ul}) {
                        const PrimeContext ctx(p);
                        for (int i = 0; i < 500; ++i) {
                          const auto x = rational(ctx), y = rational(ctx);
                          if (std::abs((x * y).norm() - x.norm() * y.norm()) > 1e-12 * x.norm() * y.norm())
                            return "norm not multiplicative";
                          const double s = (x + y).norm();
                          if (s > std::max(x.norm(), y.norm()) * (1 + 1e-15))
                            return "strong triangle fails";
                          if (x.norm() != y.norm() && s != std::max(x.norm(), y.norm()))
                            return "no equality for different norms";
                          if (std::abs(x.character() * y.character() - (x + y).character()) > 1e-12)
                            return "character not additive";
                        }
                      }
                      return "";
                    }});

  checks.push_back({"wavelet-gram", [&]() -> std::string {
                      const PrimeContext ctx(3);
                      std::vector<WaveletSum> ws;
                      std::set<WaveletIndex> seen;
                      while (ws.size() < 20) {
                        const long n = integer(-2, 2);
                        const auto idx = make_index(ctx, n, static_cast<unsigned long>(integer(1, 2)),
                                                    coset_rep(n, rational(ctx)));
                        if (!seen.insert(idx).second)
                          continue;
                        WaveletSum w(ctx);
                        w.add(idx, 1.0);
                        ws.push_back(w);
                      }
                      for (std::size_t i = 0; i < ws.size(); ++i)
                        for (std::size_t j = 0; j < ws.size(); ++j) {
                          const complex g = inner_product(to_step_function(ws[i]), to_step_function(ws[j]));
                          if (std::abs(g - (i == j ? 1.0 : 0.0)) > 1e-12)
                            return "Gram entry off by " + fmt(std::abs(g - (i == j ? 1.0 : 0.0)));
                        }
                      return "";
                    }});

  checks.push_back({"character-sphere-sum", [&]() -> std::string {
                      for (unsigned long p : {2ul, 3ul, 5ul, 7ul}) {
                        const PrimeContext ctx(p);
                        for (int i = 0; i < 50; ++i) {
                          const auto xk = rational(ctx);
                          auto x = rational(ctx);
                          if (x == xk)
                            continue;
                          if (std::abs(character_sphere_sum(x, xk) + 1.0) > 1e-12)
                            return "sum differs from -1";
                        }
                      }
                      return "";
                    }});

  checks.push_back({"scaling-identity", [&]() -> std::string {
                      const PrimeContext ctx(2);
                      const MSeries m(ctx, 2.0);
                      for (int i = 0; i < 40; ++i) {
                        const double l = std::pow(2.0, uniform(-6, 6));
                        try {
                          const auto a = m.m0(l), b = m.m0(4.0 * l);
                          if (std::abs(2.0 * b.value - a.value) > 2.0 * b.error_bound + a.error_bound + 1e-13)
                            return "p^{a-1} M0(p^a l) != M0(l) at " + fmt(l);
                        } catch (const guard_violation&) {
                        }
                      }
                      return "";
                    }});

  checks.push_back({"diff-at-zero", [&]() -> std::string {
                      const MSeries m(PrimeContext(2), 2.0);
                      const auto d = m.diff(0, 0.0);
                      return std::abs(d.value - 0.75) <= 1e-12 ? "" : "M0 - M1 at 0 is " + fmt(d.value.real());
                    }});

  checks.push_back({"friedrichs-root-law", [&]() -> std::string {
                      const auto s = friedrichs_spectrum(PrimeContext(2), 2.0, 0, -3, 3);
                      for (long n = -3; n <= 3; ++n) {
                        const auto k1 = s.in_interval(n, true).size(), k2 = s.in_interval(n, false).size();
                        if (n < 0 && (k1 != 0 || k2 != 1))
                          return "wrong count below the gap at N=" + std::to_string(n);
                        if (n >= 1 && (k1 != 1 || k2 != 1))
                          return "wrong count above the gap at N=" + std::to_string(n);
                      }
                      return recover_gamma_min(s) == 0 ? "" : "gamma_min not recovered";
                    }});

  checks.push_back({"one-point-recurrence", [&]() -> std::string {
                      const auto r = one_point_eigenvalues(PrimeContext(2), 2.0,
                                                           std::numeric_limits<double>::infinity(), -2, 2);
                      for (std::size_t i = 0; i + 1 < r.size(); ++i)
                        if (std::abs(r[i + 1].lambda / r[i].lambda - 4.0) > 4e-9)
                          return "ratio " + fmt(r[i + 1].lambda / r[i].lambda);
                      return r.size() == 5 ? "" : "expected 5 roots";
                    }});

  checks.push_back({"resolvent-boundary", [&]() -> std::string {
                      const PrimeContext ctx(3);
                      Matrix b(2, 2);
                      b << 0.7, complex(0.2, -0.1), complex(0.2, 0.1), -1.1;
                      const RealizationConfig cfg(ctx, 2.0, {PAdicRational(ctx, 0), PAdicRational(ctx, 1, 3)}, b);
                      WaveletSum f(ctx);
                      f.add(make_index(ctx, 0, 1), complex(0.5, 0.25));
                      f.add(make_index(ctx, 1, 2, coset_rep(1, PAdicRational(ctx, 1, 3))), -0.75);
                      const auto r = resolvent_apply(cfg, complex(1.3, 0.4), f);
                      if ((cfg.B * r.gamma0 - r.gamma1).norm() > 1e-8)
                        return "boundary condition residual too large";
                      const double d = std::sqrt(windowed_defect(cfg, r, f, -4, 4).norm_sq());
                      return d <= 1e-12 ? "" : "window defect " + fmt(d);
                    }});

  int failed = 0;
  for (const auto& ch : checks) {
    std::string msg;
    try {
      msg = ch.run();
    } catch (const std::exception& e) {
      msg = std::string("exception: ") + e.what();
    }
    if (msg.empty()) {
      out << "PASS " << ch.name << "\n";
    } else {
      out << "FAIL " << ch.name << ": " << msg << "\n";
      ++failed;
    }
  }
  out << "selftest: " << checks.size() - failed << "/" << checks.size() << " passed\n";
  return failed == 0 ? 0 : 1;
}

} // namespace detail

/// Exit codes: 0 success, 1 selftest failure or internal error, 2 invalid
/// input, 3 numerical refusal.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace detail;
  CLI::App app{"Spectra of p-adic Schroedinger operators with point interactions", "padic-spectra"};
  app.require_subcommand(1);
  app.set_version_flag("--version", json_io::tool_version);

  Common common;

  MfuncArgs mf;
  auto* mfunc = app.add_subcommand("mfunc", "M-series values as CSV");
  common.attach(mfunc);
  mfunc->add_option("--gamma", mf.gamma, "log_p of the distance; selects M_{p^gamma}");
  mfunc->add_option("--lambda", mf.lambda, "spectral parameter: number or [re, im]");
  mfunc->add_option("--grid", mf.grid, "real grid lo:hi:count");
  mfunc->add_flag("--diff", mf.diff, "M_0 - M_{p^gamma}");
  mfunc->add_flag("--sum", mf.sum, "M_0 + M_{p^gamma}");
  mfunc->add_flag("--derivative", mf.derivative, "d/dlambda");

  GreensArgs gr;
  auto* greens = app.add_subcommand("greens", "Green's function values, radial and from the series");
  common.attach(greens);
  greens->add_option("--center", gr.center, "x_k as a rational")->capture_default_str();
  greens->add_option("--lambda", gr.lambda, "number or [re, im]")->required();
  greens->add_option("--at", gr.at, "evaluation points x1,x2,...")->required();
  greens->add_option("--window", gr.window, "scale window N_lo:N_hi");

  SpectrumArgs sp;
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of a realization");
  common.attach(spectrum);
  spectrum->add_option("--points", sp.cfg.points, "x1,x2,...")->required();
  spectrum->add_option("--B", sp.cfg.B, "row-major JSON matrix")->required();
  spectrum->add_option("--eta", sp.cfg.eta, "parity|none")->capture_default_str();
  spectrum->add_option("--window", sp.window, "N_lo:N_hi")->capture_default_str();
  spectrum->add_flag("--negative-axis", sp.negative_axis, "scan (-inf, 0) as well");
  spectrum->add_option("--rect", sp.rect, "complex search in re0:re1:im0:im1");

  ResolventArgs rs;
  auto* resolvent = app.add_subcommand("resolvent", "apply the resolvent to a wavelet sum");
  common.attach(resolvent);
  resolvent->add_option("--points", rs.cfg.points, "x1,x2,...")->required();
  resolvent->add_option("--B", rs.cfg.B, "row-major JSON matrix")->required();
  resolvent->add_option("--eta", rs.cfg.eta, "parity|none")->capture_default_str();
  resolvent->add_option("--lambda", rs.lambda, "number or [re, im]")->required();
  resolvent->add_option("--input", rs.input, "wavelet sum JSON file")->required();
  resolvent->add_option("--window", rs.window, "defect window N_lo:N_hi");

  ModelArgs md;
  auto* model = app.add_subcommand("model", "worked one- and two-point models");
  common.attach(model);
  model->add_option("preset", md.preset, "friedrichs|sym2|pt2|onepoint")
      ->required()
      ->check(CLI::IsMember({"friedrichs", "sym2", "pt2", "onepoint"}));
  model->add_option("--gamma", md.gamma, "log_p |x1 - x2|_p")->capture_default_str();
  model->add_option("--a", md.a, "diagonal coupling")->capture_default_str();
  model->add_option("--b", md.b, "off-diagonal or one-point coupling; inf allowed")->capture_default_str();
  model->add_option("--window", md.window, "N_lo:N_hi")->capture_default_str();
  model->add_option("--trace", md.trace, "write (lambda, det) rows to this file");
  model->add_option("--trace-points", md.trace_points, "samples per interval")->capture_default_str();
  model->add_option("--sweep", md.sweep, "pt2: root counts in interval N as (a, b) shrinks");

  auto* selftest = app.add_subcommand("selftest", "quick invariant checks");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << json_io::tool_version << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (mfunc->parsed())
      return run_mfunc(common, mf, out);
    if (greens->parsed())
      return run_greens(common, gr, out);
    if (spectrum->parsed())
      return run_spectrum(common, sp, out);
    if (resolvent->parsed())
      return run_resolvent(common, rs, out);
    if (model->parsed())
      return run_model(common, md, out);
    if (selftest->parsed())
      return run_selftest(out);
  } catch (const validation_error& e) {
    err << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const error& e) {
    err << "refused: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

} // namespace padic_spectra::cli

#endif // PADIC_SPECTRA_TOOLS_CLI_HPP
