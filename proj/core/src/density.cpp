#include "distlab/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "distlab/parallel.hpp"
#include "interp.hpp"

namespace distlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_t(const SpectralGrid& g, double t) {
  if (!(t > 0.0)) throw DomainError("density: t must be positive");
  if (t > g.params.t_max * (1.0 + 1e-12))
    throw DomainError("density: t = " + std::to_string(t) + " exceeds the grid's t_max = " +
                      std::to_string(g.params.t_max));
}

double low_cut_volume(const SpectralGrid& g) {
  return sphere_area(g.dimension) * std::pow(g.low_cutoff, g.dimension) / g.dimension;
}

double sigma_at_zero(const SpectralGrid& g) {
  if (g.round) return round_sigma_hat(g.dimension, g.round_radius, 0.0, g.params.weight);
  return g.shells.front().profiles.front().front();
}

// out[f][i] = sum_k W_k f_k(rho_k) int_S |mu^|^2 t_i^(d-1) sigma^(t_i rho_k omega) d omega
// plus the analytic piece below the low cutoff, where mu^ = 1 and sigma^ is
// its value at 0.
std::vector<std::vector<double>> weighted_sums(const SpectralGrid& g, const std::vector<double>& ts,
                                               const std::vector<std::vector<double>>& factors,
                                               const std::vector<double>& at_zero) {
  for (double t : ts) check_t(g, t);
  const int d = g.dimension;
  const std::size_t nf = factors.size(), nt = ts.size();
  std::vector<std::vector<double>> out(nf, std::vector<double>(nt, 0.0));
  const double low = low_cut_volume(g) * sigma_at_zero(g);
  parallel_for(nt, [&](std::size_t i) {
    const double t = ts[i];
    const double tp = std::pow(t, d - 1);
    std::vector<double> acc(nf, 0.0);
    if (g.round) {
      for (std::size_t k = 0; k < g.rho.size(); ++k) {
        double base = g.radial_w[k] * g.angular_mass[k] * round_sigma_hat(d, g.round_radius, t * g.rho[k], g.params.weight);
        for (std::size_t f = 0; f < nf; ++f) acc[f] += base * factors[f][k];
      }
    } else {
      for (const auto& s : g.shells) {
        const std::size_t nd = s.directions.size();
        for (std::size_t k = s.begin; k < s.end; ++k) {
          const double u = t * g.rho[k];
          const double* mq = &s.mu_sq[(k - s.begin) * nd];
          double a = 0.0;
          for (std::size_t j = 0; j < nd; ++j)
            a += s.direction_weights[j] * mq[j] * interp::lagrange_even(s.profiles[j], g.profile_du, u);
          double base = g.radial_w[k] * a;
          for (std::size_t f = 0; f < nf; ++f) acc[f] += base * factors[f][k];
        }
      }
    }
    for (std::size_t f = 0; f < nf; ++f) out[f][i] = tp * (acc[f] + low * at_zero[f]);
  });
  return out;
}

// transform of the indicator of the Euclidean ball of radius a at |xi| = u
double ball_indicator_hat(int d, double a, double u) {
  double x = kTwoPi * a * u;
  if (d == 2) {
    if (x < 1e-4) return kPi * a * a * (1.0 - x * x / 8.0);
    return a * boost::math::cyl_bessel_j(1, x) / u;
  }
  if (x < 1e-3) return 4.0 / 3.0 * kPi * a * a * a * (1.0 - x * x / 10.0);
  return (std::sin(x) - x * std::cos(x)) / (2.0 * kPi * kPi * u * u * u);
}

double coarea_scale(const SpectralGrid& g) {
  // the coarea transform of the round ball is a times its surface transform;
  // the indicator transform integrates the coarea one
  return g.params.weight == BoundaryWeight::coarea ? 1.0 : 1.0 / g.round_radius;
}

std::vector<double> pair_block_sizes(std::size_t n, std::size_t block) {
  std::vector<double> v;
  for (std::size_t i = 0; i < n; i += block) v.push_back(static_cast<double>(std::min(block, n - i)));
  return v;
}

}  // namespace

double gauge_diameter(const IFSMeasure& measure, const ConvexBody& body) {
  const int d = body.dimension();
  if (measure.dimension() != d) throw DomainError("gauge_diameter: dimension mismatch");
  const Box& b = measure.bounding_box();
  Vec w{};
  for (int i = 0; i < d; ++i) w[i] = b.hi[i] - b.lo[i];
  // the difference set lies in [-w, w]; scan its boundary
  double best = 0.0;
  const int n = d == 2 ? 4096 : 128;
  for (int face = 0; face < d; ++face)
    for (int sign = -1; sign <= 1; sign += 2) {
      if (d == 2) {
        for (int k = 0; k <= n; ++k) {
          Vec x{};
          x[face] = sign * w[face];
          x[1 - face] = w[1 - face] * (2.0 * k / n - 1.0);
          best = std::max(best, gauge_norm(body, x));
        }
      } else {
        int p = (face + 1) % 3, q = (face + 2) % 3;
        for (int k = 0; k <= n; ++k)
          for (int l = 0; l <= n; ++l) {
            Vec x{};
            x[face] = sign * w[face];
            x[p] = w[p] * (2.0 * k / n - 1.0);
            x[q] = w[q] * (2.0 * l / n - 1.0);
            best = std::max(best, gauge_norm(body, x));
          }
      }
    }
  return best;
}

std::vector<double> default_t_grid(const IFSMeasure& measure, const ConvexBody& body, int n) {
  if (n < 2) throw DomainError("t-grid: need at least 2 points");
  const double D = gauge_diameter(measure, body);
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) t[static_cast<std::size_t>(i - 1)] = D * i / n;
  return t;
}

double density_tail_bound(const SpectralGrid& grid, double t) {
  const int d = grid.dimension;
  double p = 0.5 * (d - 1);
  return grid.envelope_constant * std::pow(t, p) * grid.tail_sum(p);
}

DensityValue density_M(const SpectralGrid& grid, double t) {
  std::vector<double> one(grid.rho.size(), 1.0);
  double v = weighted_sums(grid, {t}, {one}, {1.0})[0][0];
  return {v, density_tail_bound(grid, t)};
}

double nu_eps_fourier(const SpectralGrid& grid, double t, double eps) {
  if (!(eps >= 0.0)) throw DomainError("nu_eps: eps must be >= 0");
  std::vector<double> f(grid.rho.size());
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = mollifier_hat(eps, grid.rho[k]);
  return weighted_sums(grid, {t}, {f}, {1.0})[0][0];
}

DensityProfile density_profile(const SpectralGrid& grid, const std::vector<double>& ts,
                               const std::vector<double>& eps) {
  const std::size_t nr = grid.rho.size();
  std::vector<std::vector<double>> factors;
  std::vector<double> at_zero;
  factors.emplace_back(nr, 1.0);
  at_zero.push_back(1.0);
  for (double e : eps) {
    if (!(e >= 0.0)) throw DomainError("density profile: eps must be >= 0");
    std::vector<double> nu(nr), lo(nr), hi(nr);
    for (std::size_t k = 0; k < nr; ++k) {
      double r = grid.rho[k];
      nu[k] = mollifier_hat(e, r);
      double rem = std::expm1(-kPi * e * e * r * r);  // rho^ - 1
      (e * r < 1.0 ? lo : hi)[k] = rem;
    }
    factors.push_back(std::move(nu));
    at_zero.push_back(1.0);
    factors.push_back(std::move(lo));
    at_zero.push_back(0.0);
    factors.push_back(std::move(hi));
    at_zero.push_back(0.0);
  }
  auto sums = weighted_sums(grid, ts, factors, at_zero);
  DensityProfile p;
  p.t = ts;
  p.M = sums[0];
  p.tail_bound.resize(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) p.tail_bound[i] = density_tail_bound(grid, ts[i]);
  p.eps = eps;
  for (std::size_t e = 0; e < eps.size(); ++e) {
    p.nu_eps.push_back(sums[1 + 3 * e]);
    p.R_low.push_back(sums[2 + 3 * e]);
    p.R_high.push_back(sums[3 + 3 * e]);
    std::vector<double> r(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) r[i] = p.R_low.back()[i] + p.R_high.back()[i];
    p.R_eps.push_back(std::move(r));
  }
  p.diameter = ts.empty() ? 0.0 : ts.back();
  return p;
}

double window_average_fourier(const SpectralGrid& g, double t, double eps) {
  if (!g.round) throw DomainError("window average: round bodies only");
  if (!(eps > 0.0)) throw DomainError("window average: eps must be positive");
  check_t(g, t + eps);
  const int d = g.dimension;
  const double a = g.round_radius;
  auto mass_below = [&](double s) {
    if (s <= 0.0) return 0.0;
    double acc = 0.0;
    for (std::size_t k = 0; k < g.rho.size(); ++k)
      acc += g.radial_w[k] * g.angular_mass[k] * ball_indicator_hat(d, a, s * g.rho[k]);
    acc += low_cut_volume(g) * ball_indicator_hat(d, a, 0.0);
    return std::pow(s, d) * acc * coarea_scale(g);
  };
  return (mass_below(t + eps) - mass_below(t - eps)) / (2.0 * eps);
}

RemainderResult remainder_rate(const SpectralGrid& grid, const std::vector<double>& ts, const std::vector<double>& eps,
                               double tolerance) {
  RemainderResult r;
  const int d = grid.dimension;
  r.eps = eps;
  r.fit.predicted_exponent = grid.similarity_dim - 0.5 * (d + 1);
  r.fit.tolerance = tolerance;
  r.hypothesis_met = r.fit.predicted_exponent > 0.0;
  DensityProfile p = density_profile(grid, ts, eps);
  for (std::size_t e = 0; e < eps.size(); ++e) {
    double s = 0.0, lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      s = std::max(s, std::abs(p.R_eps[e][i]));
      lo = std::max(lo, std::abs(p.R_low[e][i]));
      hi = std::max(hi, std::abs(p.R_high[e][i]));
    }
    r.sup_R.push_back(s);
    r.sup_low.push_back(lo);
    r.sup_high.push_back(hi);
  }
  for (double t : ts) r.tail = std::max(r.tail, density_tail_bound(grid, t));
  const double floor = 1e-12;
  bool above_floor = std::all_of(r.sup_R.begin(), r.sup_R.end(), [&](double v) { return v > floor; });
  if (!above_floor) {
    r.fit_ok = false;
    r.note = "sup|R^eps| at the quadrature noise floor; deepen the shells";
  } else {
    try {
      double pred = r.fit.predicted_exponent;
      r.fit = fit_power_law(eps, r.sup_R);
      r.fit.predicted_exponent = pred;
      r.fit.tolerance = tolerance;
      if (r.fit.octaves < 4.0) {
        r.fit_ok = false;
        r.note = "eps list spans fewer than 4 octaves";
      }
    } catch (const FitError& ex) {
      r.fit_ok = false;
      r.note = ex.what();
    }
  }
  if (r.fit_ok) {
    for (std::size_t e = 0; e < eps.size(); ++e)
      r.sandwich_ratio = std::max(r.sandwich_ratio, r.sup_R[e] / (r.fit.constant * std::pow(eps[e], r.fit.exponent)));
  }
  if (!r.hypothesis_met) {
    r.note = "hypothesis not met: s <= (d+1)/2, bound vacuous";
    r.pass = true;
  } else {
    r.pass = r.fit_ok && r.fit.exponent >= r.fit.predicted_exponent - tolerance;
  }
  r.fit.pass = r.pass;
  return r;
}

EnergyResult dyadic_energy(const SpectralGrid& grid, int j_lo, int j_hi, double tolerance, double noise_floor) {
  EnergyResult r;
  const int d = grid.dimension;
  if (j_hi < 0) j_hi = grid.j_max();
  std::vector<double> xs;
  for (const auto& s : grid.shells) {
    if (s.j < j_lo || s.j > j_hi) continue;
    if (!(s.energy > noise_floor * s.volume)) continue;
    r.shells.push_back(s.j);
    r.energies.push_back(s.energy);
    xs.push_back(s.lo);
  }
  double pred = d - grid.similarity_dim;
  try {
    r.fit = fit_power_law(xs, r.energies);
  } catch (const FitError& ex) {
    r.fit_ok = false;
    r.note = ex.what();
  }
  r.fit.predicted_exponent = pred;
  r.fit.tolerance = tolerance;
  r.pass = r.fit_ok && r.fit.exponent <= pred + tolerance;
  r.fit.pass = r.pass;
  return r;
}

GaussianCalibration gaussian_calibration(int d, double gamma) {
  if (d < 1 || !(gamma > 0.0) || !(gamma < d)) throw DomainError("gaussian calibration: need 0 < gamma < d");
  // mu = N(0, I): |mu^(xi)|^2 = exp(-4 pi^2 |xi|^2); x - y ~ N(0, 2 I)
  boost::math::quadrature::exp_sinh<double> q;
  const double S = sphere_area(d);
  double f = q.integrate([&](double r) { return std::pow(r, d - 1 - gamma) * std::exp(-4.0 * kPi * kPi * r * r); });
  double norm = std::pow(4.0 * kPi, -0.5 * d);
  double s = q.integrate([&](double r) { return std::pow(r, gamma - 1) * norm * std::exp(-0.25 * r * r); });
  GaussianCalibration c;
  c.fourier_side = S * f;
  c.space_side = S * s;
  c.constant = c.fourier_side / c.space_side;
  return c;
}

EnergyIdentity energy_integral_identity(const SpectralGrid& grid, const IFSMeasure& measure, double gamma,
                                        std::size_t n_pairs, std::uint64_t seed, double tolerance) {
  const int d = grid.dimension;
  if (measure.dimension() != d) throw DomainError("energy identity: dimension mismatch");
  if (!(gamma > 0.0) || !(gamma < d)) throw DomainError("energy identity: need 0 < gamma < d");
  if (n_pairs < 16) throw DomainError("energy identity: need at least 16 pairs");
  EnergyIdentity r;
  r.gamma = gamma;

  double grid_part = 0.0;
  for (std::size_t k = 0; k < grid.rho.size(); ++k)
    grid_part += grid.radial_w[k] * grid.angular_mass[k] * std::pow(grid.rho[k], -gamma);
  grid_part += sphere_area(d) * std::pow(grid.low_cutoff, d - gamma) / (d - gamma);
  r.fourier_tail = grid.tail_sum(gamma);
  r.fourier_side = grid_part + r.fourier_tail;

  // pair sums in fixed blocks, reduced in block order
  const std::size_t block = 4096;
  const std::size_t nb = (n_pairs + block - 1) / block;
  struct Part {
    double sum = 0.0, sq = 0.0, top = 0.0;
    std::size_t rejected = 0;
  };
  std::vector<Part> parts(nb);
  const double power = gamma - d;
  parallel_for(nb, [&](std::size_t b) {
    Part p;
    std::size_t end = std::min(n_pairs, (b + 1) * block);
    for (std::size_t i = b * block; i < end; ++i) {
      double dist = 0.0;
      for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
        std::uint64_t idx = 2 * (i + attempt * n_pairs);
        Vec x = measure.sample(seed, idx), y = measure.sample(seed, idx + 1);
        dist = norm(sub(x, y), d);
        if (dist > 0.0) break;
        ++p.rejected;
      }
      if (!(dist > 0.0)) continue;
      double v = std::pow(dist, power);
      p.sum += v;
      p.sq += v * v;
      p.top = std::max(p.top, v);
    }
    parts[b] = p;
  });
  double sum = 0.0, sq = 0.0, top = 0.0;
  std::size_t counted = 0;
  double sum16 = 0.0, sum4 = 0.0, sq16 = 0.0, sq4 = 0.0;
  std::size_t n16 = 0, n4 = 0;
  auto sizes = pair_block_sizes(n_pairs, block);
  for (std::size_t b = 0; b < nb; ++b) {
    sum += parts[b].sum;
    sq += parts[b].sq;
    top = std::max(top, parts[b].top);
    r.rejected_pairs += parts[b].rejected;
    counted += static_cast<std::size_t>(sizes[b]);
    if (counted <= n_pairs / 16 || n16 == 0) {
      sum16 = sum;
      sq16 = sq;
      n16 = counted;
    }
    if (counted <= n_pairs / 4 || n4 == 0) {
      sum4 = sum;
      sq4 = sq;
      n4 = counted;
    }
  }
  auto mean_se = [](double s, double s2, std::size_t n) {
    double m = s / static_cast<double>(n);
    double var = std::max(0.0, s2 / static_cast<double>(n) - m * m);
    return std::pair<double, double>{m, std::sqrt(var / static_cast<double>(n))};
  };
  auto [m, se] = mean_se(sum, sq, n_pairs);
  auto [m4, se4] = mean_se(sum4, sq4, n4);
  auto [m16, se16] = mean_se(sum16, sq16, n16);
  r.space_side = m;
  r.space_stderr = se;
  r.max_term_share = sum > 0.0 ? top / sum : 1.0;

  GaussianCalibration cal = gaussian_calibration(d, gamma);
  r.calibrated_constant = cal.constant;
  r.ratio = r.fourier_side / r.space_side;
  r.relative_error = std::abs(r.ratio / r.calibrated_constant - 1.0);

  bool tail_finite = std::isfinite(r.fourier_tail);
  bool stable = std::abs(m - m4) <= 3.0 * std::hypot(se, se4) && std::abs(m4 - m16) <= 3.0 * std::hypot(se4, se16);
  bool light = r.max_term_share < 1e-2;
  r.converged = tail_finite && stable && light;
  if (!tail_finite) r.note = "Fourier tail diverges: gamma <= d - s per the shell energy growth";
  else if (!light) r.note = "single pair dominates the Riesz sum";
  else if (!stable) r.note = "Monte Carlo estimate not stable in the sample size";
  if (gamma <= d - grid.similarity_dim && r.note.empty()) r.note = "gamma <= d - s: identity not expected to converge";
  r.pass = r.converged && r.relative_error <= tolerance;
  return r;
}

int smoothness_order(double s, int d) {
  double excess = s - 0.5 * (d + 1);
  if (!(excess > 0.0)) return -1;
  int m = static_cast<int>(std::ceil(excess)) - 1;  // largest m with m < excess
  return std::max(0, m);
}

DerivativeResult density_derivative(const SpectralGrid& g, double t, int m) {
  if (m < 1 || m > 3) throw DomainError("density derivative: order must be 1..3");
  if (!g.round) throw DomainError("density derivative: round bodies only");
  check_t(g, t);
  const int d = g.dimension;
  const double a = g.round_radius;
  // (t^(d-1))^(j)
  auto power_deriv = [&](int j) {
    if (d == 2) return j == 0 ? t : j == 1 ? 1.0 : 0.0;
    return j == 0 ? t * t : j == 1 ? 2.0 * t : j == 2 ? 2.0 : 0.0;
  };
  static const int binom[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
  double acc = 0.0;
  for (std::size_t k = 0; k < g.rho.size(); ++k) {
    const double rho = g.rho[k], u = t * rho;
    double jet = 0.0, rp = 1.0;
    for (int i = 0; i <= m; ++i) {
      jet += binom[m][i] * power_deriv(m - i) * rp * round_sigma_hat_derivative(d, a, u, i, g.params.weight);
      rp *= rho;
    }
    acc += g.radial_w[k] * g.angular_mass[k] * jet;
  }
  acc += low_cut_volume(g) * power_deriv(m) * sigma_at_zero(g);
  DerivativeResult r;
  r.order = m;
  r.value = acc;
  double p = 0.5 * (d - 1) - m;
  double ts = g.tail_sum(p);
  r.tail_bound = std::isfinite(ts) ? g.envelope_constant * std::pow(kTwoPi * a, m) * std::pow(t, 0.5 * (d - 1)) * ts : kInf;
  r.warning = !(g.similarity_dim > 0.5 * (d + 1) + m);
  if (r.warning)
    r.note = "s <= (d+1)/2 + m: the differentiated integral is not known to converge; tail bound " +
             std::string(std::isfinite(r.tail_bound) ? "finite only by extrapolation" : "diverges");
  return r;
}

double holder_quotient(const SpectralGrid& grid, const std::vector<std::pair<double, double>>& pairs, double alpha) {
  std::vector<double> ts;
  for (const auto& [u, v] : pairs) {
    ts.push_back(u);
    ts.push_back(v);
  }
  std::vector<double> one(grid.rho.size(), 1.0);
  auto M = weighted_sums(grid, ts, {one}, {1.0})[0];
  double best = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    double h = std::abs(pairs[i].first - pairs[i].second);
    if (h == 0.0) continue;
    best = std::max(best, std::abs(M[2 * i] - M[2 * i + 1]) / std::pow(h, alpha));
  }
  return best;
}

HolderResult holder_certificate(const DensityProfile& p, double alpha, double s, int d, std::size_t first,
                                std::size_t last, int octaves, double growth_limit) {
  if (p.t.size() < 2) throw DomainError("holder: profile too short");
  if (last >= p.t.size() || first >= last) throw DomainError("holder: bad index range");
  HolderResult r;
  r.alpha = alpha;
  r.hypothesis_met = s > 0.5 * (d + 1) + alpha;
  const double h = p.t[1] - p.t[0];
  for (int o = 0; o <= octaves; ++o) {
    std::size_t step = std::size_t{1} << o;
    double q = 0.0;
    for (std::size_t i = first; i + step <= last; ++i) {
      double sep = p.t[i + step] - p.t[i];
      q = std::max(q, std::abs(p.M[i + step] - p.M[i]) / std::pow(sep, alpha));
    }
    r.separations.push_back(h * static_cast<double>(step));
    r.octave_max.push_back(q);
  }
  r.cumulative_max.resize(r.octave_max.size());
  double run = 0.0;
  for (std::size_t k = r.octave_max.size(); k-- > 0;) {
    run = std::max(run, r.octave_max[k]);
    r.cumulative_max[k] = run;
  }
  r.max_quotient = r.cumulative_max.front();
  r.growth = r.cumulative_max.back() > 0.0 ? r.cumulative_max.front() / r.cumulative_max.back() : kInf;
  r.pass = r.growth < growth_limit;
  return r;
}

std::vector<Interval> interval_certificate(const DensityProfile& p, double c) {
  if (!(c > 0.0)) throw DomainError("interval certificate: threshold must be positive");
  std::vector<Interval> out;
  std::size_t i = 0;
  const std::size_t n = p.t.size();
  while (i < n) {
    if (!(p.M[i] - p.tail_bound[i] > c)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && p.M[j + 1] - p.tail_bound[j + 1] > c) ++j;
    if (j > i) out.push_back({p.t[i], p.t[j]});
    i = j + 1;
  }
  return out;
}

MassCheck mass_check(const DensityProfile& p, double cap) {
  MassCheck r;
  const std::size_t n = p.t.size();
  if (n < 2) throw DomainError("mass check: profile too short");
  std::vector<double> x(n + 1, 0.0), y(n + 1, 0.0), tl(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    x[i + 1] = p.t[i];
    y[i + 1] = p.M[i];
    tl[i + 1] = p.tail_bound[i];
  }
  double trap = 0.0, tail = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    trap += 0.5 * (x[i + 1] - x[i]) * (y[i] + y[i + 1]);
    tail += 0.5 * (x[i + 1] - x[i]) * (tl[i] + tl[i + 1]);
  }
  // Simpson over the largest even number of intervals, trapezoid on the rest
  double simp = 0.0;
  std::size_t m = n % 2 == 0 ? n : n - 1;
  for (std::size_t i = 0; i + 2 <= m; i += 2) {
    double h = 0.5 * (x[i + 2] - x[i]);
    simp += h / 3.0 * (y[i] + 4.0 * y[i + 1] + y[i + 2]);
  }
  if (m < n) simp += 0.5 * (x[n] - x[n - 1]) * (y[n - 1] + y[n]);
  r.mass = trap;
  r.tail_integral = tail;
  r.quadrature_error = std::abs(trap - simp);
  r.tolerance = std::min(cap, tail + r.quadrature_error);
  r.min_M = *std::min_element(p.M.begin(), p.M.end());
  r.pass = std::abs(r.mass - 1.0) <= r.tolerance;
  return r;
}

}  // namespace distlab
