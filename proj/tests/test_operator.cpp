#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace padic_spectra;

namespace {

std::vector<PAdicRational> pts(const PrimeContext& ctx, std::initializer_list<std::pair<long, long>> xs) {
  std::vector<PAdicRational> out;
  for (auto [a, b] : xs)
    out.emplace_back(ctx, a, b);
  return out;
}

Matrix mat(std::initializer_list<std::initializer_list<complex>> rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (const auto& v : r)
      m(i, j++) = v;
    ++i;
  }
  return m;
}

Matrix random_hermitian(oracle::Rng& rng, Eigen::Index n) {
  Matrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      a(i, j) = complex(rng.uniform(-2, 2), rng.uniform(-2, 2));
  return 0.5 * (a + a.adjoint());
}

} // namespace

TEST(Operator, BuildM) {
  const PrimeContext ctx(2);
  const MSeries m(ctx, 2.0);
  const RealizationConfig one(ctx, 2.0, pts(ctx, {{0, 1}}), mat({{1.0}}));
  const Matrix m1 = build_M(one, -1.0).value;
  ASSERT_EQ(m1.rows(), 1);
  EXPECT_EQ(m1(0, 0), m.m0(-1.0).value);

  const RealizationConfig two(ctx, 2.0, pts(ctx, {{0, 1}, {1, 2}}), Matrix::Identity(2, 2));
  const Matrix m2 = build_M(two, complex(-0.5, 0.3)).value;
  EXPECT_EQ(m2(0, 1), m2(1, 0));
  EXPECT_EQ(m2(0, 1), m.m_gamma(1, complex(-0.5, 0.3)).value);
  EXPECT_EQ(m2(0, 0), m.m0(complex(-0.5, 0.3)).value);
}

TEST(Operator, ConfigValidation) {
  const PrimeContext ctx(3);
  EXPECT_THROW(RealizationConfig(ctx, 2.0, pts(ctx, {{1, 1}, {1, 1}}), Matrix::Identity(2, 2)), validation_error);
  EXPECT_THROW(RealizationConfig(ctx, 2.0, pts(ctx, {{1, 1}}), Matrix::Identity(2, 2)), validation_error);
  EXPECT_THROW(RealizationConfig(ctx, 1.0, pts(ctx, {{1, 1}}), Matrix::Identity(1, 1)), validation_error);
  EXPECT_THROW(RealizationConfig(ctx, 2.0, pts(ctx, {{1, 1}}), Matrix::Identity(1, 1), Matrix::Zero(1, 1)),
               validation_error);
}

TEST(Operator, Classification) {
  const PrimeContext ctx(3);
  const auto y = pts(ctx, {{1, 3}, {-1, 3}});
  EXPECT_EQ(classify_realization(RealizationConfig(ctx, 2.0, y, mat({{1.0, 2.0}, {2.0, -1.0}}))),
            Realization::self_adjoint);
  const Matrix parity = eta_matrix_parity(y);
  EXPECT_EQ(parity, mat({{0.0, 1.0}, {1.0, 0.0}}));
  const complex b11(0.4, 0.7);
  const Matrix ex1 = mat({{b11, 1.5}, {-0.25, std::conj(b11)}});
  EXPECT_EQ(classify_realization(RealizationConfig(ctx, 2.0, y, ex1, parity)), Realization::eta_self_adjoint);
  EXPECT_EQ(classify_realization(RealizationConfig(ctx, 2.0, y, ex1)), Realization::neither);
  const Matrix anti = mat({{complex(0, 1), 0.0}, {0.0, complex(0, 1)}});
  EXPECT_EQ(classify_realization(RealizationConfig(ctx, 2.0, y, anti)), Realization::neither);
  EXPECT_THROW(classify_realization(RealizationConfig(ctx, 2.0, y, anti), true), validation_error);
}

TEST(Operator, ParityMatrix) {
  const PrimeContext ctx(3);
  EXPECT_EQ(eta_matrix_parity(pts(ctx, {{0, 1}})), mat({{1.0}}));
  EXPECT_THROW(eta_matrix_parity(pts(ctx, {{1, 1}, {2, 1}})), validation_error);
}

TEST(Operator, CharDet) {
  const PrimeContext ctx(2);
  const MSeries m(ctx, 2.0);
  const RealizationConfig free_cfg(ctx, 2.0, pts(ctx, {{0, 1}, {1, 1}}), Matrix::Zero(2, 2));
  EXPECT_EQ(char_det(free_cfg, 0.7), complex(1.0, 0.0));
  RealSpectrumOptions opt;
  opt.negative_axis = true;
  EXPECT_TRUE(find_real_eigenvalues(free_cfg, opt).empty());

  const double b = 0.8;
  const RealizationConfig one(ctx, 2.0, pts(ctx, {{0, 1}}), mat({{b}}));
  for (double l : {-2.0, 0.3, 5.0})
    EXPECT_NEAR(std::abs(char_det(one, l) - (b * m.m0(l).value + 1.0)), 0.0, 1e-14);
}

TEST(Operator, OnePointRealSpectrum) {
  const PrimeContext ctx(2);
  const MSeries m(ctx, 2.0);
  RealSpectrumOptions opt;
  opt.n_lo = -3;
  opt.n_hi = 3;
  opt.negative_axis = true;
  for (double b : {2.0, 0.5}) {
    const auto recs = find_real_eigenvalues(RealizationConfig(ctx, 2.0, pts(ctx, {{0, 1}}), mat({{b}})), opt);
    ASSERT_EQ(recs.size(), 7u);
    for (long n = -3; n <= 3; ++n) {
      const auto& r = recs[static_cast<std::size_t>(n + 3)];
      ASSERT_EQ(*r.interval, n);
      EXPECT_NEAR(m.m0(r.lambda).real(), -1.0 / b, 1e-8);
      EXPECT_EQ(r.multiplicity, 1);
    }
  }
  for (double b : {-2.0, -0.5}) {
    const auto recs = find_real_eigenvalues(RealizationConfig(ctx, 2.0, pts(ctx, {{0, 1}}), mat({{b}})), opt);
    ASSERT_EQ(recs.size(), 8u);
    EXPECT_TRUE(recs[0].negative_axis);
    EXPECT_LT(recs[0].lambda.real(), 0.0);
    EXPECT_NEAR(m.m0(recs[0].lambda).real(), -1.0 / b, 1e-8);
  }
}

TEST(Operator, RefusesNonRealCharacteristicFunction) {
  const PrimeContext ctx(3);
  const RealizationConfig cfg(ctx, 2.0, pts(ctx, {{0, 1}, {1, 1}}), mat({{complex(0, 1), 0.0}, {0.0, 1.0}}));
  EXPECT_THROW(find_real_eigenvalues(cfg, {}), validation_error);
}

TEST(Operator, DoubleRootMultiplicity) {
  // Three points at mutual distance 1 (p = 3) and B = b I: M has the
  // eigenvalue M_0 - M_1 twice, so 1 + b(M_0 - M_1) = 0 gives a double root.
  const PrimeContext ctx(3);
  const MSeries m(ctx, 2.0);
  const double b = 1.5;
  const RealizationConfig cfg(ctx, 2.0, pts(ctx, {{0, 1}, {1, 1}, {2, 1}}), b * Matrix::Identity(3, 3));
  RealSpectrumOptions opt;
  opt.n_lo = 0;
  opt.n_hi = 1;
  const auto recs = find_real_eigenvalues(cfg, opt);
  int doubles = 0;
  for (const auto& r : recs) {
    if (r.multiplicity == 2) {
      ++doubles;
      EXPECT_NEAR((m.m0(r.lambda) - m.m_gamma(0, r.lambda)).real(), -1.0 / b, 1e-6);
      EXPECT_EQ(r.method, "touching");
    }
  }
  EXPECT_GE(doubles, 1);
}

TEST(Operator, SingularBIsFlagged) {
  const PrimeContext ctx(2);
  const RealizationConfig cfg(ctx, 2.0, pts(ctx, {{0, 1}, {1, 2}}), mat({{1.0, 0.0}, {0.0, 0.0}}));
  RealSpectrumOptions opt;
  opt.n_lo = 0;
  opt.n_hi = 1;
  const auto recs = find_real_eigenvalues(cfg, opt);
  ASSERT_FALSE(recs.empty());
  for (const auto& r : recs)
    EXPECT_TRUE(r.extension);
}

TEST(Operator, ComplexSearch) {
  const PrimeContext ctx(2);
  const RealizationConfig one(ctx, 2.0, pts(ctx, {{0, 1}}), mat({{0.5}}));
  // Self-adjoint: nothing off the axis.
  EXPECT_TRUE(find_complex_eigenvalues(one, Rect{-3.0, 3.0, 0.05, 2.0}).empty());
  // One interval straddled: exactly the real root.
  RealSpectrumOptions opt;
  opt.n_lo = 0;
  opt.n_hi = 0;
  const auto real = find_real_eigenvalues(one, opt);
  ASSERT_EQ(real.size(), 1u);
  const auto cplx = find_complex_eigenvalues(one, Rect{1.0 + 1e-6, 4.0 - 1e-5, -0.5, 0.5});
  ASSERT_EQ(cplx.size(), 1u);
  EXPECT_NEAR(std::abs(cplx[0].lambda - real[0].lambda), 0.0, 1e-9);
  EXPECT_EQ(*cplx[0].interval, 0);
  EXPECT_THROW(find_complex_eigenvalues(one, Rect{0.5, 5.0, -1, 1}), validation_error);
  EXPECT_THROW(find_complex_eigenvalues(one, Rect{-1, 1, -1, 1}), validation_error);
}

TEST(Operator, ComplexSearchMatchesRealScanForParityConfig) {
  const PrimeContext ctx(2);
  const auto y = pts(ctx, {{1, 2}, {-1, 2}});
  const double a = 0.6, b = 0.9;
  // B^{-1} = [[-i a, b], [-b, i a]].
  const Matrix binv = mat({{complex(0, -a), b}, {-b, complex(0, a)}});
  const RealizationConfig cfg(ctx, 2.0, y, binv.inverse(), eta_matrix_parity(y));
  ASSERT_EQ(classify_realization(cfg), Realization::eta_self_adjoint);
  RealSpectrumOptions opt;
  opt.n_lo = -2;
  opt.n_hi = 2;
  opt.negative_axis = true;
  const auto real = find_real_eigenvalues(cfg, opt);
  const auto fam = characteristic_family(cfg);
  for (long n = -2; n <= 2; ++n) {
    const double lo = std::pow(4.0, n) * (1 + 1e-6), hi = std::pow(4.0, n + 1) * (1 - 1e-6);
    const auto cplx = find_complex_eigenvalues(cfg, Rect{lo, hi, -0.3 * lo, 0.3 * lo});
    // Every real root is found again; the rest come in conjugate pairs.
    std::size_t on_axis = 0;
    for (const auto& r : real) {
      if (!r.interval || *r.interval != n)
        continue;
      ++on_axis;
      const bool found = std::any_of(cplx.begin(), cplx.end(), [&](const EigenvalueRecord& c) {
        return std::abs(c.lambda - r.lambda) <= 1e-8 * std::abs(r.lambda);
      });
      EXPECT_TRUE(found) << "N=" << n << " lambda=" << r.lambda;
    }
    std::size_t off_axis = 0;
    for (const auto& c : cplx) {
      if (c.interval)
        continue;
      ++off_axis;
      const bool paired = std::any_of(cplx.begin(), cplx.end(), [&](const EigenvalueRecord& d) {
        return std::abs(d.lambda - std::conj(c.lambda)) <= 1e-8 * std::abs(c.lambda);
      });
      EXPECT_TRUE(paired) << c.lambda;
      EXPECT_LE(std::abs(fam.K(c.lambda).determinant()), 1e-10);
    }
    EXPECT_EQ(on_axis + off_axis, cplx.size());
    EXPECT_EQ(off_axis % 2, 0u);
  }
}

TEST(Operator, BoundaryData) {
  const PrimeContext ctx(3);
  const auto y = pts(ctx, {{0, 1}, {1, 3}, {5, 1}});
  const RealizationConfig cfg(ctx, 2.0, y, Matrix::Identity(3, 3));
  const Matrix m = build_M(cfg, -1.0).value;
  for (std::size_t k = 0; k < y.size(); ++k) {
    DomainElement f{WaveletSum(ctx), {{y[k], -1.0, 1.0}}};
    const auto bd = boundary_data(cfg, f);
    for (Eigen::Index i = 0; i < 3; ++i) {
      EXPECT_EQ(bd.gamma1(i), complex(i == static_cast<Eigen::Index>(k) ? -1.0 : 0.0, 0.0));
      EXPECT_NEAR(std::abs(bd.gamma0(i) - m(static_cast<Eigen::Index>(k), i)), 0.0, 1e-12);
    }
  }
  // Wavelets supported away from Y, and mean-zero at each point's scale.
  WaveletSum u(ctx);
  u.add(WaveletIndex{0, 1, coset_rep(0, PAdicRational(ctx, 1, 9))}, complex(0.3, 0.1));
  u.add(WaveletIndex{-2, 2, coset_rep(-2, PAdicRational(ctx, 2, 1))}, 1.0);
  const auto bd = boundary_data(cfg, DomainElement{u, {}});
  EXPECT_LE(bd.gamma0.norm() + bd.gamma1.norm(), 1e-14);
  DomainElement bad{u, {{y[0], -2.0, 1.0}}};
  EXPECT_THROW(boundary_data(cfg, bad), validation_error);
}

TEST(Operator, EigenvectorSatisfiesBoundaryCondition) {
  const PrimeContext ctx(3);
  oracle::Rng rng(307);
  const auto y = pts(ctx, {{0, 1}, {1, 3}, {4, 1}});
  const RealizationConfig cfg(ctx, 2.0, y, random_hermitian(rng, 3));
  const MSeries m(ctx, 2.0);
  RealSpectrumOptions opt;
  opt.n_lo = -1;
  opt.n_hi = 1;
  opt.negative_axis = true;
  const auto recs = find_real_eigenvalues(cfg, opt);
  ASSERT_FALSE(recs.empty());
  for (const auto& r : recs) {
    const Matrix k = char_matrix(cfg, m, r.lambda);
    const Vector c = null_vector(k);
    Vector g0(3), g1 = -c;
    for (Eigen::Index i = 0; i < 3; ++i) {
      complex s = 0;
      for (Eigen::Index j = 0; j < 3; ++j)
        s += c(j) * eval_h(m, y[static_cast<std::size_t>(j)], r.lambda, y[static_cast<std::size_t>(i)]).value;
      g0(i) = s;
    }
    EXPECT_LE((cfg.B * g0 - g1).norm(), 1e-8 * (1 + cfg.B.norm() * g0.norm()));
  }
}

TEST(Operator, ResolventFreeCase) {
  const PrimeContext ctx(2);
  const RealizationConfig cfg(ctx, 2.0, pts(ctx, {{0, 1}}), Matrix::Zero(1, 1));
  WaveletSum f(ctx);
  f.add(make_index(ctx, 0, 1), 1.0);
  f.add(make_index(ctx, 2, 1), complex(0, 2));
  const auto r = resolvent_apply(cfg, complex(-0.5, 0.2), f);
  EXPECT_TRUE(r.green.empty());
  const WaveletSum back = apply_shifted(r.diagonal, 2.0, complex(-0.5, 0.2));
  EXPECT_LE(std::sqrt((back - f).norm_sq()), 1e-14);
}

TEST(Operator, ResolventBoundaryAndWindow) {
  oracle::Rng rng(311);
  for (int trial = 0; trial < 8; ++trial) {
    const unsigned long p = trial % 2 ? 3 : 2;
    const PrimeContext ctx(p);
    const MSeries m(ctx, 2.0);
    const Eigen::Index n = 1 + trial % 3;
    std::vector<PAdicRational> y;
    while (static_cast<Eigen::Index>(y.size()) < n) {
      const PAdicRational x = rng.padic(ctx, 2, 10);
      if (std::find(y.begin(), y.end(), x) == y.end())
        y.push_back(x);
    }
    const RealizationConfig cfg(ctx, 2.0, y, random_hermitian(rng, n));
    WaveletSum f(ctx);
    for (int k = 0; k < 5; ++k) {
      const auto& xk = y[static_cast<std::size_t>(rng.integer(0, n - 1))];
      const long lev = rng.integer(-2, 2);
      f.add(WaveletIndex{lev, static_cast<unsigned long>(rng.integer(1, static_cast<long>(p) - 1)), coset_rep(lev, xk)},
            complex(rng.uniform(-1, 1), rng.uniform(-1, 1)));
    }
    const complex lambda(rng.uniform(-3, 3), rng.uniform(0.1, 1.0));
    const auto r = resolvent_apply(cfg, lambda, f);
    // v_k is the free resolvent evaluated at x_k.
    for (Eigen::Index k = 0; k < n; ++k)
      EXPECT_NEAR(std::abs(r.v(k) - evaluate(r.diagonal, y[static_cast<std::size_t>(k)])), 0.0, 1e-12);
    // Boundary values from radial evaluation of the output.
    Vector g0(n);
    for (Eigen::Index i = 0; i < n; ++i)
      g0(i) = evaluate(m, r.diagonal, r.green, y[static_cast<std::size_t>(i)]);
    EXPECT_LE((g0 - r.gamma0).norm(), 1e-10);
    EXPECT_LE((cfg.B * g0 - r.gamma1).norm(), 1e-8);
    const WaveletSum defect = windowed_defect(cfg, r, f, -6, 6);
    EXPECT_LE(std::sqrt(defect.norm_sq()), 1e-12);
  }
}

TEST(Operator, ResolventAtEigenvalueIsSingular) {
  const PrimeContext ctx(2);
  const RealizationConfig cfg(ctx, 2.0, pts(ctx, {{0, 1}}), mat({{-0.5}}));
  RealSpectrumOptions opt;
  opt.n_lo = 0;
  opt.n_hi = 0;
  opt.negative_axis = true;
  const auto recs = find_real_eigenvalues(cfg, opt);
  ASSERT_FALSE(recs.empty());
  WaveletSum f(ctx);
  f.add(make_index(ctx, 0, 1), 1.0);
  EXPECT_THROW(resolvent_apply(cfg, recs[0].lambda, f), singular_system);
  EXPECT_THROW(resolvent_apply(cfg, 4.0, f), guard_violation);
}
