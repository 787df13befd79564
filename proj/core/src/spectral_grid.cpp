#include "distlab/spectral_grid.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <sstream>

#include "distlab/parallel.hpp"
#include "distlab/quadrature.hpp"
#include "interp.hpp"
#include "kernels.hpp"

namespace distlab {

namespace {

constexpr int kPanel = 16;             // Gauss-Legendre nodes per radial panel
constexpr int kLowPanels = 20;         // dyadic panels of the low cell, down to 2^-20
constexpr double kPanelPhase = 40.0;   // radial bandwidth * panel length
constexpr double kProfileSteps = 32.0; // samples per unit of r_max * u

std::size_t round_up(std::size_t n, std::size_t m) { return (n + m - 1) / m * m; }

double oversampling(const GridParams& p) { return p.angular_level / 8.0; }

// Folded direction set on the sphere of radius rho_hi for a bandwidth radius W:
// every direction is a representative of its orbit under the symmetry group.
struct DirectionSet {
  std::vector<Vec> dirs;
  std::vector<double> w;
};

DirectionSet directions_2d(std::size_t n, int fold) {
  DirectionSet s;
  const double dth = kTwoPi / static_cast<double>(n);
  for (std::size_t i = 0; i < n / static_cast<std::size_t>(fold); ++i) {
    double th = dth * (static_cast<double>(i) + 0.5);
    s.dirs.push_back({std::cos(th), std::sin(th), 0.0});
    s.w.push_back(dth * fold);
  }
  return s;
}

DirectionSet directions_3d(std::size_t nl, int fold) {
  DirectionSet s;
  const std::size_t nz = round_up(nl / 2, 2);
  const GaussRule& gl = gauss_legendre(static_cast<int>(nz));
  const double dl = kTwoPi / static_cast<double>(nl);
  // fold 2: upper hemisphere; 8: one octant; 16: half an octant
  const std::size_t nb = fold == 2 ? nl : fold == 8 ? nl / 4 : nl / 8;
  for (std::size_t a = 0; a < nz / 2; ++a) {
    double z = gl.nodes[a];
    double sz = std::sqrt(std::max(0.0, 1.0 - z * z));
    for (std::size_t b = 0; b < nb; ++b) {
      double lam = dl * (static_cast<double>(b) + 0.5);
      s.dirs.push_back({sz * std::cos(lam), sz * std::sin(lam), z});
      s.w.push_back(gl.weights[a] * dl * fold);
    }
  }
  return s;
}

// Node count resolving exp(-2 pi i rho w . x) for |x| <= W on the sphere.
std::size_t angular_count(int d, double rho, double W, const GridParams& p) {
  double b = kTwoPi * rho * W * oversampling(p);
  return round_up(static_cast<std::size_t>(std::ceil(b)) + (d == 2 ? 64 : 32), 8);
}

DirectionSet direction_set(int d, double rho, double W, const GridParams& p, int fold) {
  std::size_t n = angular_count(d, rho, W, p);
  return d == 2 ? directions_2d(n, fold) : directions_3d(n, fold);
}

double factor_diameter(const IFSMeasure& f) { return f.bounding_box().hi[0] - f.bounding_box().lo[0]; }

bool same_factor(const IFSMeasure& a, const IFSMeasure& b) { return a.describe() == b.describe(); }

// |mu_f^(u)|^2 for every u of a one-dimensional factor
void factor_sq(const IFSMeasure& f, const std::vector<double>& u, std::vector<double>& out) {
  std::vector<Vec> xi(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) xi[i] = {u[i], 0.0, 0.0};
  out.resize(u.size());
  if (!u.empty()) mu_hat_sq_batch(f, xi.data(), out.data(), u.size());
}

// Circle average table C(r) = int_0^2pi f1(r cos) f2(r sin) for the first two
// factors of a three-factor product.
struct CircleTable {
  double h = 0.0;
  std::vector<double> c;
};

CircleTable circle_table(const IFSMeasure& m, double r_hi, const GridParams& p, std::size_t& nodes) {
  const auto& f = m.factors();
  const double W = std::hypot(factor_diameter(f[0]), factor_diameter(f[1]));
  const bool swap = same_factor(f[0], f[1]);
  const int fold = swap ? 8 : 4;
  CircleTable t;
  t.h = 1.0 / (kProfileSteps * W);
  const std::size_t n = static_cast<std::size_t>(std::ceil(r_hi / t.h)) + interp::kStencil + 2;
  t.c.resize(n);
  std::vector<std::size_t> counts(n);
  parallel_for(n, [&](std::size_t k) {
    double r = t.h * static_cast<double>(k);
    DirectionSet ds = directions_2d(angular_count(2, r, W, p), fold);
    std::vector<double> u1(ds.dirs.size()), u2(ds.dirs.size()), a, b;
    for (std::size_t i = 0; i < ds.dirs.size(); ++i) {
      u1[i] = r * ds.dirs[i][0];
      u2[i] = r * ds.dirs[i][1];
    }
    factor_sq(f[0], u1, a);
    factor_sq(f[1], u2, b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += ds.w[i] * a[i] * b[i];
    t.c[k] = s;
    counts[k] = ds.dirs.size();
  });
  for (auto c : counts) nodes += c;
  return t;
}

Vec reflect(const Vec& x, int which) {
  Vec y = x;
  if (which == 3) std::swap(y[0], y[1]);
  else y[which] = -y[which];
  return y;
}

bool measure_invariant(const IFSMeasure& m, int which) {
  const int d = m.dimension();
  for (int k = 0; k < 48; ++k) {
    Vec xi{};
    for (int c = 0; c < d; ++c) xi[c] = 13.0 * std::sin(1.7 * k + 2.3 * c + 0.4) + 0.37 * c;
    double a = mu_hat_sq(m, xi), b = mu_hat_sq(m, reflect(xi, which));
    if (std::abs(a - b) > 1e-12) return false;
  }
  return true;
}

bool body_invariant(const ConvexBody& body, int which) {
  const int d = body.dimension();
  for (int k = 0; k < 256; ++k) {
    Vec w{};
    for (int c = 0; c < d; ++c) w[c] = std::sin(0.9 * k + 1.3 * c + 0.2) + 0.1 * c;
    double n = norm(w, d);
    w = scaled(w, 1.0 / n);
    if (std::abs(body.radial(w) - body.radial(reflect(w, which))) > 1e-13 * body.r_max()) return false;
  }
  return true;
}

double round_envelope_constant(int d, double a, BoundaryWeight weight) {
  double c = 0.0;
  const double p = 0.5 * (d - 1);
  for (int i = 0; i <= 40000; ++i) {
    double u = 4.0 + (253.0 * i) / 40000.0;
    c = std::max(c, std::abs(round_sigma_hat(d, a, u, weight)) * std::pow(u, p));
  }
  return c;
}

}  // namespace

double difference_radius(const IFSMeasure& m) {
  const Box& b = m.bounding_box();
  double s = 0.0;
  for (int c = 0; c < m.dimension(); ++c) s += (b.hi[c] - b.lo[c]) * (b.hi[c] - b.lo[c]);
  return std::sqrt(s);
}

int symmetry_order(const IFSMeasure& m, const ConvexBody& body) {
  const int d = body.dimension();
  auto inv = [&](int which) { return measure_invariant(m, which) && body_invariant(body, which); };
  if (d == 2) {
    if (!inv(0)) return 2;
    return inv(3) ? 8 : 4;
  }
  if (!(inv(0) && inv(1))) return 2;
  return inv(3) ? 16 : 8;
}

const GridShell& SpectralGrid::shell(int j) const {
  for (const auto& s : shells)
    if (s.j == j) return s;
  throw DomainError("SpectralGrid: no shell " + std::to_string(j));
}

double SpectralGrid::tail_sum(double p) const {
  if (energy_fit.points == 0) return std::numeric_limits<double>::infinity();
  double beta = energy_fit.exponent;
  double q = std::pow(2.0, beta - p);
  if (!(q < 1.0)) return std::numeric_limits<double>::infinity();
  const GridShell& last = shells.back();
  return last.energy * std::pow(2.0, -p * last.j) * q / (1.0 - q);
}

SpectralGrid build_spectral_grid(const IFSMeasure& measure, const ConvexBody& body, const GridParams& params) {
  const int d = body.dimension();
  if (measure.dimension() != d) throw DomainError("spectral grid: measure and body dimensions differ");
  if (params.j_min != 0) throw DomainError("spectral grid: j_min must be 0 (the low cell covers [0, 1])");
  if (params.j_max < 1 || params.j_max > 14) throw DomainError("spectral grid: j_max must lie in 1..14");
  if (params.angular_level < 1) throw DomainError("spectral grid: angular_level must be >= 1");
  if (params.radial_nodes < 1) throw DomainError("spectral grid: radial_nodes must be >= 1");
  if (!(params.t_max > 0.0)) throw DomainError("spectral grid: t_max must be positive");

  SpectralGrid g;
  g.dimension = d;
  g.params = params;
  g.measure_label = measure.describe();
  g.body_label = body.describe();
  g.similarity_dim = measure.similarity_dim();
  g.round = body.round();
  g.round_radius = g.round ? body.round_radius() : 1.0;
  g.fold = symmetry_order(measure, body);
  g.cylindrical = g.round && d == 3 && measure.has_product_structure();

  const double Wmu = difference_radius(measure);
  const double Wt = params.t_max * body.r_max();
  const double omega = kTwoPi * (Wmu + Wt);
  const double panel_len = kPanelPhase / omega;

  // radial rule: graded low cell, then the dyadic shells
  {
    GridShell low;
    low.j = -1;
    low.lo = 0.0;
    low.hi = 1.0;
    RadialNodes rn;
    for (int k = kLowPanels - 1; k >= 0; --k) {
      double a = std::ldexp(1.0, -k - 1), b = std::ldexp(1.0, -k);
      int panels = std::max(1, static_cast<int>(std::ceil((b - a) / panel_len)));
      append_composite(rn, a, b, panels, kPanel);
    }
    low.begin = 0;
    low.end = rn.x.size();
    g.rho = rn.x;
    g.radial_w = rn.w;
    g.shells.push_back(low);
    g.low_cutoff = std::ldexp(1.0, -kLowPanels);
  }
  for (int j = 0; j <= params.j_max; ++j) {
    GridShell s;
    s.j = j;
    s.lo = std::ldexp(1.0, j);
    s.hi = std::ldexp(1.0, j + 1);
    int panels = std::max((params.radial_nodes + kPanel - 1) / kPanel,
                          static_cast<int>(std::ceil((s.hi - s.lo) / panel_len)));
    RadialNodes rn;
    append_composite(rn, s.lo, s.hi, panels, kPanel);
    s.begin = g.rho.size();
    g.rho.insert(g.rho.end(), rn.x.begin(), rn.x.end());
    g.radial_w.insert(g.radial_w.end(), rn.w.begin(), rn.w.end());
    s.end = g.rho.size();
    g.shells.push_back(s);
  }
  for (std::size_t k = 0; k < g.rho.size(); ++k) g.radial_w[k] *= std::pow(g.rho[k], d - 1);
  const std::size_t nr = g.rho.size();
  g.angular_mass.assign(nr, 0.0);

  if (g.cylindrical) {
    // int_{S^2} = int_{-1}^{1} dz int_0^{2pi} dlambda; the inner circle
    // average only depends on rho sqrt(1 - z^2).
    const auto& f = measure.factors();
    const double W12 = std::hypot(factor_diameter(f[0]), factor_diameter(f[1]));
    const double W3 = factor_diameter(f[2]);
    std::size_t nodes = 0;
    CircleTable tab = circle_table(measure, g.rho.back(), params, nodes);
    std::vector<std::size_t> counts(nr);
    parallel_for(nr, [&](std::size_t k) {
      double rho = g.rho[k];
      // z = cos(theta) over theta in [0, pi/2] (the integrand is even in z);
      // the phase is then smooth in theta with derivative <= 2 pi rho hypot(W3, W12)
      int panels = static_cast<int>(
                       std::ceil(oversampling(params) * kTwoPi * rho * std::hypot(W3, W12) * (kPi / 2.0) / kPanelPhase)) + 1;
      RadialNodes th;
      append_composite(th, 0.0, kPi / 2.0, panels, kPanel);
      const std::size_t n = th.x.size();
      std::vector<double> u(n), f3;
      for (std::size_t i = 0; i < n; ++i) u[i] = rho * std::cos(th.x[i]);
      factor_sq(f[2], u, f3);
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double st = std::sin(th.x[i]);
        s += th.w[i] * st * f3[i] * interp::lagrange_even(tab.c, tab.h, rho * st);
      }
      g.angular_mass[k] = 2.0 * s;  // both halves of z in [-1, 1]
      counts[k] = n;
    });
    for (auto c : counts) nodes += c;
    g.node_count = nodes;
  } else if (g.round) {
    std::vector<std::size_t> counts(nr);
    parallel_for(nr, [&](std::size_t k) {
      double rho = g.rho[k];
      DirectionSet ds = direction_set(d, rho, Wmu, params, g.fold);
      std::vector<Vec> xi(ds.dirs.size());
      for (std::size_t i = 0; i < xi.size(); ++i) xi[i] = scaled(ds.dirs[i], rho);
      std::vector<double> v(xi.size());
      mu_hat_sq_batch(measure, xi.data(), v.data(), xi.size());
      double s = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) s += ds.w[i] * v[i];
      g.angular_mass[k] = s;
      counts[k] = xi.size();
    });
    for (auto c : counts) g.node_count += c;
  } else {
    // Non-round: per-shell direction sets, |mu^|^2 at every node and sigma^
    // profiles along every direction.
    g.profile_du = 1.0 / (kProfileSteps * body.r_max());
    for (auto& s : g.shells) {
      DirectionSet ds = direction_set(d, s.hi, Wmu + Wt, params, g.fold);
      s.directions = ds.dirs;
      s.direction_weights = ds.w;
      const std::size_t nd = ds.dirs.size(), nk = s.end - s.begin;
      s.mu_sq.assign(nk * nd, 0.0);
      parallel_for(nk, [&](std::size_t k) {
        std::vector<Vec> xi(nd);
        for (std::size_t i = 0; i < nd; ++i) xi[i] = scaled(ds.dirs[i], g.rho[s.begin + k]);
        mu_hat_sq_batch(measure, xi.data(), &s.mu_sq[k * nd], nd);
      });
      for (std::size_t k = 0; k < nk; ++k) {
        double a = 0.0;
        for (std::size_t i = 0; i < nd; ++i) a += ds.w[i] * s.mu_sq[k * nd + i];
        g.angular_mass[s.begin + k] = a;
      }
      const std::size_t count =
          static_cast<std::size_t>(std::ceil(params.t_max * s.hi / g.profile_du)) + interp::kStencil + 2;
      double u_max = g.profile_du * static_cast<double>(count - 1);
      s.boundary_level = resolving_level(body, u_max);
      BoundaryRule rule(body, s.boundary_level);
      s.profiles.assign(nd, {});
      parallel_for(nd, [&](std::size_t i) {
        std::vector<cdouble> p = rule.profile(ds.dirs[i], g.profile_du, count, params.weight);
        s.profiles[i].resize(count);
        for (std::size_t k = 0; k < count; ++k) s.profiles[i][k] = p[k].real();
      });
      g.node_count += nk * nd;
    }
  }

  for (auto& s : g.shells) {
    s.volume = 0.0;
    s.energy = 0.0;
    for (std::size_t k = s.begin; k < s.end; ++k) {
      s.volume += g.radial_w[k] * sphere_area(d);
      s.energy += g.radial_w[k] * g.angular_mass[k];
    }
  }
  // low cell below the cutoff: |mu^|^2 ~ 1 there
  g.shells[0].volume += sphere_area(d) * std::pow(g.low_cutoff, d) / d;
  g.shells[0].energy += sphere_area(d) * std::pow(g.low_cutoff, d) / d;

  {
    std::vector<double> xs, ys;
    int first = params.j_max >= 6 ? 2 : 1;
    for (const auto& s : g.shells)
      if (s.j >= first && s.energy > 0.0) {
        xs.push_back(s.lo);
        ys.push_back(s.energy);
      }
    if (xs.size() >= 5) {
      g.energy_fit = fit_power_law(xs, ys);
      g.energy_fit.predicted_exponent = d - g.similarity_dim;
    }
  }

  if (g.round) {
    g.envelope_constant = round_envelope_constant(d, g.round_radius, params.weight);
    // closed form against the boundary quadrature it replaces
    double err = 0.0;
    for (double u : {0.5, 3.7, 17.3}) {
      Vec xi = scaled(d == 2 ? Vec{0.6, 0.8, 0.0} : Vec{0.48, 0.6, 0.64}, u);
      BoundaryRule rule(body, resolving_level(body, u));
      double q = rule.transform(xi, params.weight).real();
      err = std::max(err, std::abs(q - round_sigma_hat(d, g.round_radius, u, params.weight)));
    }
    g.round_check_error = err;
    if (err > 1e-7 * sphere_area(d)) throw std::logic_error("spectral grid: closed-form sigma^ disagrees with quadrature");
  } else {
    DecayOptions opt;
    opt.weight = params.weight;
    opt.window_samples = d == 2 ? 9 : 5;
    DecayCertificate c = decay_certificate(body, {4, 8, 16, 32, 64}, default_directions(d, d == 2 ? 16 : 4), opt);
    g.envelope_constant = c.envelope_constant;
  }
  return g;
}

double shell_volume_error(const SpectralGrid& grid) {
  const int d = grid.dimension;
  double err = 0.0;
  for (const auto& s : grid.shells) {
    double exact = sphere_area(d) * (std::pow(s.hi, d) - std::pow(s.lo, d)) / d;
    err = std::max(err, std::abs(s.volume - exact) / exact);
  }
  return err;
}

}  // namespace distlab
