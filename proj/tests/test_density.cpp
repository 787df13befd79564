#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "distlab/density.hpp"
#include "distlab/parallel.hpp"

using namespace distlab;

namespace {

GridParams small_params(int j_max, double t_max) {
  GridParams p;
  p.j_max = j_max;
  p.t_max = t_max;
  return p;
}

const SpectralGrid& cantor_grid() {
  static const SpectralGrid g = build_spectral_grid(IFSMeasure::cantor_product(2, 0.45), ConvexBody::ball(2),
                                                    small_params(7, std::sqrt(2.0)));
  return g;
}

const SpectralGrid& square_grid() {
  static const SpectralGrid g =
      build_spectral_grid(IFSMeasure::lebesgue_cube(2), ConvexBody::ball(2), small_params(8, std::sqrt(2.0)));
  return g;
}

// Density of |x - y| for x, y uniform on the unit square.
double square_density(double t) {
  if (t <= 1.0) return 2.0 * t * (t * t - 4.0 * t + kPi);
  return 2.0 * t * (4.0 * std::sqrt(t * t - 1.0) - (t * t + 2.0 - kPi) - 4.0 * std::acos(1.0 / t));
}

DensityProfile synthetic(std::function<double(double)> f, double D, int n) {
  DensityProfile p;
  p.diameter = D;
  for (int i = 1; i <= n; ++i) {
    double t = i * D / n;
    p.t.push_back(t);
    p.M.push_back(f(t));
    p.tail_bound.push_back(0.0);
  }
  return p;
}

}  // namespace

TEST(Density, SquareDistanceLaw) {
  // values frozen from mpmath agree with square_density
  EXPECT_NEAR(square_density(0.25), 1.1020463267948966192, 1e-14);
  EXPECT_NEAR(square_density(1.2), 0.029160748909222547065, 1e-13);
  const SpectralGrid& g = square_grid();
  for (double t : {0.25, 0.5, 0.9, 1.2}) {
    DensityValue v = density_M(g, t);
    EXPECT_LE(std::abs(v.value - square_density(t)), v.tail_bound + 1e-6) << t;
    EXPECT_NEAR(v.value, square_density(t), 0.02) << t;
  }
}

TEST(Density, CantorMassIsOne) {
  const SpectralGrid& g = cantor_grid();
  DensityProfile p = density_profile(g, default_t_grid(IFSMeasure::cantor_product(2, 0.45), ConvexBody::ball(2)));
  MassCheck m = mass_check(p);
  EXPECT_TRUE(m.pass) << m.mass << " tol " << m.tolerance;
  EXPECT_NEAR(m.mass, 1.0, 0.02);
}

TEST(Density, ShellVolumesExact) { EXPECT_LT(shell_volume_error(cantor_grid()), 1e-12); }

TEST(Density, DomainChecks) {
  const SpectralGrid& g = cantor_grid();
  EXPECT_THROW(density_M(g, 0.0), DomainError);
  EXPECT_THROW(density_M(g, 2.0), DomainError);
  EXPECT_NO_THROW(density_M(g, 1.0));
}

TEST(Density, GaussianCalibrationIsRieszConstant) {
  // pi^(gamma - d/2) Gamma((d - gamma)/2) / Gamma(gamma/2), mpmath
  struct Case {
    int d;
    double g, c;
  } cases[] = {{2, 1.7, 12.4600755884702677714625803198},
               {2, 1.8, 22.2450679901885659470439009521},
               {2, 1.9, 52.8875151804087276666060842821},
               {3, 1.7, 1.56502695676175297412723432179},
               {3, 2.0, 3.14159265358979323846264338328}};
  for (const auto& c : cases) EXPECT_NEAR(gaussian_calibration(c.d, c.g).constant / c.c, 1.0, 1e-8) << c.d << " " << c.g;
  EXPECT_THROW(gaussian_calibration(2, 2.5), DomainError);
}

TEST(Density, SmoothnessOrder) {
  EXPECT_EQ(smoothness_order(1.736, 2), 0);
  EXPECT_EQ(smoothness_order(2.6, 3), 0);
  EXPECT_EQ(smoothness_order(2.6, 2), 1);
  EXPECT_EQ(smoothness_order(1.4, 2), -1);
  EXPECT_EQ(smoothness_order(1.5, 2), -1);  // strict inequality
}

TEST(Density, GridRoundTrip) {
  const SpectralGrid& g = cantor_grid();
  auto path = std::filesystem::temp_directory_path() / "distlab_grid_roundtrip.txt";
  save_grid(g, path.string());
  SpectralGrid h = load_grid(path.string());
  EXPECT_TRUE(grid_matches(h, IFSMeasure::cantor_product(2, 0.45), ConvexBody::ball(2), g.params));
  EXPECT_FALSE(grid_matches(h, IFSMeasure::cantor_product(2, 0.44), ConvexBody::ball(2), g.params));
  for (double t : {0.3, 0.77, 1.2}) EXPECT_EQ(density_M(g, t).value, density_M(h, t).value);
  std::filesystem::remove(path);
}

TEST(Density, ThreadCountDoesNotChangeResults) {
  const SpectralGrid& g = cantor_grid();
  std::vector<double> ts{0.2, 0.5, 0.8, 1.1};
  set_threads(1);
  DensityProfile a = density_profile(g, ts, {0.1, 0.05});
  set_threads(0);
  DensityProfile b = density_profile(g, ts, {0.1, 0.05});
  EXPECT_EQ(a.M, b.M);
  EXPECT_EQ(a.nu_eps, b.nu_eps);
}

TEST(Density, RemainderShrinksWithEps) {
  const SpectralGrid& g = cantor_grid();
  DensityProfile p = density_profile(g, {0.3, 0.6, 0.9}, {0.125, 0.0625, 0.03125});
  double prev = 1e300;
  for (const auto& r : p.R_eps) {
    double sup = 0.0;
    for (double v : r) sup = std::max(sup, std::abs(v));
    EXPECT_LT(sup, prev);
    prev = sup;
  }
}

TEST(Density, WindowAverageOfSquare) {
  // (F(t + eps) - F(t - eps)) / (2 eps) with the closed-form density
  const SpectralGrid& g = square_grid();
  double t = 0.6, eps = 0.05, s = 0.0;
  const int n = 2000;
  for (int i = 0; i < n; ++i) s += square_density(t - eps + (i + 0.5) * 2 * eps / n);
  EXPECT_NEAR(window_average_fourier(g, t, eps), s / n, 0.01);
}

TEST(Density, EnergySlope) {
  // shells 2..7 only; the acceptance suite checks the bound out to j = 11
  EnergyResult e = dyadic_energy(cantor_grid(), 2);
  const double pred = 2.0 - 1.7361064491754327702;
  EXPECT_NEAR(e.fit.predicted_exponent, pred, 1e-12);
  EXPECT_EQ(e.pass, e.fit.exponent <= pred + 0.1);
  EXPECT_NEAR(e.fit.exponent, pred, 0.2);
  EXPECT_EQ(e.shells.size(), 6u);
}

TEST(Density, IntervalsOnSyntheticProfile) {
  DensityProfile p = synthetic([](double t) { return (t > 0.2 && t < 0.6) ? 1.0 : 0.0; }, 1.0, 100);
  auto iv = interval_certificate(p, 0.5);
  ASSERT_EQ(iv.size(), 1u);
  EXPECT_NEAR(iv[0].a, 0.21, 1e-12);
  EXPECT_NEAR(iv[0].b, 0.59, 1e-12);
  // isolated points are not intervals
  DensityProfile q = synthetic([](double t) { return std::abs(t - 0.5) < 1e-9 ? 1.0 : 0.0; }, 1.0, 100);
  EXPECT_TRUE(interval_certificate(q, 0.5).empty());
}

TEST(Density, MassOfSyntheticTriangle) {
  DensityProfile p = synthetic([](double t) { return t <= 1.0 ? 2.0 * t : 0.0; }, 1.0, 64);
  MassCheck m = mass_check(p);
  EXPECT_NEAR(m.mass, 1.0, 1e-12);
  EXPECT_TRUE(m.pass);
}

TEST(Density, HolderOnSmoothAndRoughProfiles) {
  DensityProfile smooth = synthetic([](double t) { return std::sin(3.0 * t); }, 1.0, 256);
  HolderResult h = holder_certificate(smooth, 0.1, 1.736, 2, 31, 223);
  EXPECT_TRUE(h.hypothesis_met);
  EXPECT_EQ(h.separations.size(), 5u);
  EXPECT_LT(h.growth, 2.0);
  EXPECT_TRUE(h.pass);
  // a jump has quotient h^(-alpha): growth 2^(4 alpha) = 4 at alpha = 1/2
  DensityProfile step = synthetic([](double t) { return t < 0.5 ? 0.0 : 1.0; }, 1.0, 256);
  HolderResult hs = holder_certificate(step, 0.5, 2.5, 2, 31, 223);
  EXPECT_NEAR(hs.growth, 4.0, 1e-9);
  EXPECT_FALSE(hs.pass);
  EXPECT_FALSE(holder_certificate(smooth, 0.1, 1.55, 2, 31, 223).hypothesis_met);
}

TEST(Density, DerivativeWarnsBelowThreshold) {
  DerivativeResult r = density_derivative(cantor_grid(), 0.7, 1);
  EXPECT_TRUE(r.warning);
  EXPECT_TRUE(std::isinf(r.tail_bound));
}
