#ifndef PADIC_SPECTRA_JSON_IO_HPP
#define PADIC_SPECTRA_JSON_IO_HPP

// Complex numbers are [re, im], rationals "a/b", matrices row-major arrays
// of rows. Non-finite reals are written as the strings "inf", "-inf", "nan".

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "padic_spectra/models.hpp"
#include "padic_spectra/operator.hpp"

namespace padic_spectra::json_io {

using json = nlohmann::ordered_json;

inline json real(double x) {
  if (std::isnan(x))
    return "nan";
  if (std::isinf(x))
    return x > 0 ? "inf" : "-inf";
  return x;
}

/// Shortest text that reads back as x.
inline std::string fmt_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline double parse_real(const json& j) {
  if (j.is_number())
    return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf")
      return std::numeric_limits<double>::infinity();
    if (s == "-inf")
      return -std::numeric_limits<double>::infinity();
  }
  throw validation_error("expected a real number, got " + j.dump());
}

inline json cplx(complex z) { return json::array({real(z.real()), real(z.imag())}); }

/// A bare number or an [re, im] pair.
inline complex parse_complex(const json& j) {
  if (j.is_array()) {
    if (j.size() != 2)
      throw validation_error("complex numbers are [re, im] pairs, got " + j.dump());
    return {parse_real(j[0]), parse_real(j[1])};
  }
  return {parse_real(j), 0.0};
}

/// Unicode minus signs are accepted and read as '-'.
inline std::string normalize_minus(std::string s) {
  const std::string minus = "\xE2\x88\x92";
  for (auto pos = s.find(minus); pos != std::string::npos; pos = s.find(minus, pos))
    s.replace(pos, minus.size(), "-");
  return s;
}

inline json parse_text(const std::string& text) {
  try {
    return json::parse(normalize_minus(text));
  } catch (const json::parse_error& e) {
    throw validation_error(std::string("malformed JSON: ") + e.what());
  }
}

inline json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out.push_back(cplx(v(i)));
  return out;
}

inline json matrix_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k)
      row.push_back(cplx(m(i, k)));
    out.push_back(row);
  }
  return out;
}

inline Matrix parse_matrix(const json& j) {
  if (!j.is_array() || j.empty())
    throw validation_error("a matrix is a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      throw validation_error("matrix must be square, row " + std::to_string(i) + " is " + row.dump());
    for (Eigen::Index k = 0; k < n; ++k)
      m(i, k) = parse_complex(row[static_cast<std::size_t>(k)]);
  }
  return m;
}

inline std::vector<PAdicRational> parse_points(const PrimeContext& ctx, const std::string& text) {
  std::vector<PAdicRational> out;
  const std::string s = normalize_minus(text);
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    std::string item = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty())
      throw validation_error("empty entry in point list '" + text + "'");
    out.push_back(PAdicRational::parse(ctx, item));
    if (comma == std::string::npos)
      break;
    start = comma + 1;
  }
  return out;
}

inline json points_json(const std::vector<PAdicRational>& pts) {
  json out = json::array();
  for (const auto& x : pts)
    out.push_back(x.to_string());
  return out;
}

inline json to_json(const MEvaluation& e) {
  return {{"value", cplx(e.value)}, {"bound", real(e.error_bound)}, {"terms", e.terms_used}};
}

inline json to_json(const WaveletSum& ws) {
  json out = json::array();
  for (const auto& [idx, c] : ws)
    out.push_back({{"N", idx.n}, {"j", idx.j}, {"eps_digits", idx.eps.digits()}, {"re", real(c.real())},
                   {"im", real(c.imag())}});
  return out;
}

inline WaveletSum parse_wavelet_sum(const PrimeContext& ctx, const json& j) {
  if (!j.is_array())
    throw validation_error("a wavelet sum is an array of {N, j, eps_digits, re, im}");
  WaveletSum ws(ctx);
  for (const auto& t : j) {
    if (!t.is_object() || !t.contains("N") || !t.contains("j"))
      throw validation_error("wavelet term needs N and j: " + t.dump());
    std::vector<unsigned long> digits;
    if (t.contains("eps_digits"))
      for (const auto& d : t.at("eps_digits")) {
        if (!d.is_number_integer() || d.get<long>() < 0)
          throw validation_error("coset digits are non-negative integers: " + t.dump());
        digits.push_back(d.get<unsigned long>());
      }
    const json& jj = t.at("j");
    if (!jj.is_number_integer() || jj.get<long>() < 1)
      throw validation_error("wavelet frequency j must lie in 1..p-1: " + t.dump());
    const double re = t.contains("re") ? parse_real(t.at("re")) : 0.0;
    const double im = t.contains("im") ? parse_real(t.at("im")) : 0.0;
    ws.add(make_index(ctx, t.at("N").get<long>(), jj.get<unsigned long>(), CosetEpsilon(digits, ctx)),
           complex(re, im));
  }
  return ws;
}

inline json optional_long(const std::optional<long>& v) { return v ? json(*v) : json(nullptr); }
inline json optional_real(const std::optional<double>& v) { return v ? real(*v) : json(nullptr); }

inline json to_json(const EigenvalueRecord& r) {
  return {{"lambda", cplx(r.lambda)},
          {"interval", optional_long(r.interval)},
          {"negative_axis", r.negative_axis},
          {"multiplicity", r.multiplicity},
          {"residual", real(r.residual)},
          {"sigma_max", real(r.sigma_max)},
          {"uncertainty", real(r.uncertainty)},
          {"extension", r.extension},
          {"method", r.method}};
}

inline json to_json(const std::vector<EigenvalueRecord>& recs) {
  json out = json::array();
  for (const auto& r : recs)
    out.push_back(to_json(r));
  return out;
}

inline json to_json(const ClassifiedSpectrum& s) {
  auto roots = [](const std::vector<IntervalRoot>& v) {
    json out = json::array();
    for (const auto& r : v)
      out.push_back({{"interval", r.interval}, {"lambda", real(r.lambda)}});
    return out;
  };
  return {{"gamma", s.gamma},
          {"window", {s.n_lo, s.n_hi}},
          {"type1", roots(s.type1)},
          {"type2", roots(s.type2)},
          {"lambda_minus", optional_real(s.lambda_minus)},
          {"lambda_plus", optional_real(s.lambda_plus)},
          {"notes", s.notes}};
}

inline json to_json(const GreenComponent& g) {
  return {{"center", g.center.to_string()}, {"lambda", cplx(g.lambda)}, {"weight", cplx(g.weight)}};
}

inline json to_json(const ResolventResult& r) {
  json green = json::array();
  for (const auto& g : r.green)
    green.push_back(to_json(g));
  return {{"lambda", cplx(r.lambda)},   {"diagonal", to_json(r.diagonal)}, {"green", green},
          {"v", vector_json(r.v)},      {"w", vector_json(r.w)},           {"gamma0", vector_json(r.gamma0)},
          {"gamma1", vector_json(r.gamma1)}};
}

inline constexpr const char* tool_version = "0.1.0";

/// Everything needed to reproduce an output file.
struct RunManifest {
  std::string command;
  json parameters = json::object();
  double series_tol = default_series_tol;
  double root_tol = 1e-10;
  std::string output = "-";

  json to_json() const {
    return {{"command", command},
            {"parameters", parameters},
            {"version", tool_version},
            {"tolerances", {{"series", series_tol}, {"roots", root_tol}}},
            {"output", output}};
  }
};

} // namespace padic_spectra::json_io

#endif // PADIC_SPECTRA_JSON_IO_HPP
