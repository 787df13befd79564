#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace distlab {

// Points and frequencies live in R^2 or R^3; unused trailing coordinates are 0.
using Vec = std::array<double, 3>;
using cdouble = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Fourier convention used everywhere: f^(xi) = int exp(-2 pi i x.xi) f(x) dx.
inline constexpr const char* kFourierConvention = "exp(-2*pi*i*x.xi)";

inline double dot(const Vec& a, const Vec& b, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vec& a, int d) { return std::sqrt(dot(a, a, d)); }

inline Vec scaled(const Vec& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

inline Vec sub(const Vec& a, const Vec& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

inline Vec add(const Vec& a, const Vec& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }

// Surface area of the unit sphere S^{d-1}.
inline double sphere_area(int d) { return d == 2 ? kTwoPi : 4.0 * kPi; }

struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// sigma_hat asked for a frequency the boundary rule cannot resolve.
struct ResolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// mu_hat truncation bound above tolerance for the requested depth.
struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A rate fit could not be formed (too few points, noise floor, ...).
struct FitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace distlab
