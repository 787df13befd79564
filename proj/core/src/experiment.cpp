#include "distlab/experiment.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "distlab/density.hpp"
#include "distlab/fourier.hpp"
#include "distlab/oracle.hpp"
#include "distlab/rng.hpp"

namespace distlab {

namespace {

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Shortest round-trip form, for names built from config values (1.9, not 1.8999999999999999).
std::string short_num(double v) {
  char buf[48];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string flag(bool b) { return b ? "true" : "false"; }

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
  return s;
}

class Csv {
 public:
  Csv(const ExperimentConfig& cfg, const std::string& name, const std::vector<std::string>& columns) : name_(name) {
    out_ << "# distlab " << name << "\n";
    out_ << "# measure = " << cfg.measure.describe() << "\n";
    out_ << "# body = " << cfg.body.describe() << "\n";
    out_ << "# convention = " << kFourierConvention << "\n";
    for (const auto& [k, v] : cfg.raw.effective()) out_ << "# " << k << " = " << v << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
    out_ << "\n";
  }
  void row(const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) out_ << (i ? "," : "") << num(v[i]);
    out_ << "\n";
  }
  void write(const std::filesystem::path& dir, RunResult& r) const {
    std::ofstream f(dir / name_);
    if (!f) throw std::runtime_error("cannot write " + (dir / name_).string());
    f << out_.str();
    r.files.push_back(name_);
  }

 private:
  std::string name_;
  std::ostringstream out_;
};

class Runner {
 public:
  Runner(const ExperimentConfig& cfg, RunResult& res, std::filesystem::path dir)
      : cfg_(cfg), res_(res), dir_(std::move(dir)), d_(cfg.body.dimension()) {}

  void run() {
    header();
    build_grid();
    ts_ = default_t_grid(cfg_.measure, cfg_.body, cfg_.t_points);
    first_ = static_cast<std::size_t>(cfg_.t_points / 8 - 1);
    last_ = static_cast<std::size_t>(7 * cfg_.t_points / 8 - 1);
    bulk_.assign(ts_.begin() + static_cast<long>(first_), ts_.begin() + static_cast<long>(last_) + 1);
    for (Certificate c : all_certificates()) {
      if (!cfg_.wants(c)) continue;
      CertificateVerdict v{c, certificate_claim(c), false, {}};
      switch (c) {
        case Certificate::decay: decay(v); break;
        case Certificate::energy: energy(v); break;
        case Certificate::identity: identity(v); break;
        case Certificate::remainder: remainder(v); break;
        case Certificate::agreement: agreement(v); break;
        case Certificate::mass: mass(v); break;
        case Certificate::interval: interval(v); break;
        case Certificate::coverage: coverage(v); break;
        case Certificate::holder: holder(v); break;
        case Certificate::derivative: derivative(v); break;
      }
      std::string p = std::string("certificate.") + certificate_name(c) + ".";
      put(p + "claim", v.claim);
      put(p + "pass", flag(v.pass));
      put(p + "warnings", join(v.warnings));
      res_.verdicts.push_back(v);
    }
    summary();
  }

 private:
  void put(const std::string& k, const std::string& v) { res_.report.emplace_back(k, v); }
  void put(const std::string& k, double v) { put(k, num(v)); }

  void header() {
    put("distlab.verdict_version", "1");
    put("distlab.convention", kFourierConvention);
    for (const auto& [k, v] : cfg_.raw.effective()) put("config." + k, v);
    put("measure.label", cfg_.measure.describe());
    put("measure.similarity_dim", cfg_.measure.similarity_dim());
    put("measure.moran_residual", cfg_.measure.moran_residual());
    put("measure.open_set_condition", flag(cfg_.measure.open_set_condition()));
    put("body.label", cfg_.body.describe());
    put("body.r_min", cfg_.body.r_min());
    put("body.r_max", cfg_.body.r_max());
    put("tgrid.diameter", cfg_.diameter);
  }

  void build_grid() {
    namespace fs = std::filesystem;
    const std::string& cache = cfg_.grid_cache;
    bool loaded = false;
    if (!cache.empty() && fs::exists(cache)) {
      try {
        grid_ = load_grid(cache);
        loaded = grid_matches(grid_, cfg_.measure, cfg_.body, cfg_.grid);
      } catch (const DomainError& e) {
        std::cerr << "distlab: ignoring grid cache " << cache << ": " << e.what() << "\n";
      }
      if (!loaded) std::cerr << "distlab: grid cache " << cache << " does not match; rebuilding\n";
    }
    if (!loaded) {
      grid_ = build_spectral_grid(cfg_.measure, cfg_.body, cfg_.grid);
      if (!cache.empty()) save_grid(grid_, cache);
    }
    put("grid.radial_nodes_total", num(static_cast<double>(grid_.rho.size())));
    put("grid.evaluations", num(static_cast<double>(grid_.node_count)));
    put("grid.max_frequency", grid_.max_frequency());
    put("grid.round", flag(grid_.round));
    put("grid.fold", num(grid_.fold));
    put("grid.cylindrical", flag(grid_.cylindrical));
    put("grid.volume_error", shell_volume_error(grid_));
    put("grid.envelope_constant", grid_.envelope_constant);
    put("grid.round_check_error", grid_.round_check_error);
    put("grid.energy_growth", grid_.energy_fit.exponent);
    put("grid.energy_growth_points", num(grid_.energy_fit.points));
    Csv csv(cfg_, "grid_shells.csv", {"j", "lo", "hi", "volume", "energy", "boundary_level"});
    for (const auto& s : grid_.shells) csv.row({double(s.j), s.lo, s.hi, s.volume, s.energy, double(s.boundary_level)});
    csv.write(dir_, res_);
  }

  const DensityProfile& profile() {
    if (!profile_ready_) {
      profile_ = density_profile(grid_, ts_, cfg_.eps);
      profile_ready_ = true;
      std::vector<std::string> cols = {"t", "M", "tail_bound"};
      for (double e : cfg_.eps) cols.push_back("nu_eps_" + short_num(e));
      Csv csv(cfg_, "profile.csv", cols);
      for (std::size_t i = 0; i < ts_.size(); ++i) {
        std::vector<double> row = {ts_[i], profile_.M[i], profile_.tail_bound[i]};
        for (std::size_t e = 0; e < cfg_.eps.size(); ++e) row.push_back(profile_.nu_eps[e][i]);
        csv.row(row);
      }
      csv.write(dir_, res_);
    }
    return profile_;
  }

  void fit_keys(const std::string& p, const RateFit& f) {
    put(p + "exponent", f.exponent);
    put(p + "predicted_exponent", f.predicted_exponent);
    put(p + "tolerance", f.tolerance);
    put(p + "constant", f.constant);
    put(p + "residual", f.residual);
    put(p + "octaves", f.octaves);
    put(p + "points", num(f.points));
  }

  void decay(CertificateVerdict& v) {
    const std::string p = "decay.";
    CurvatureCertificate cc = curvature_certificate(cfg_.body, cfg_.curvature_level);
    DecayOptions o;
    o.tolerance = cfg_.tol_rate;
    o.two_sided = cfg_.decay_two_sided;
    std::vector<Vec> dirs = default_directions(d_, cfg_.decay_directions);
    std::vector<Vec> flat = inflection_normals(cfg_.body, cfg_.curvature_level);
    dirs.insert(dirs.end(), flat.begin(), flat.end());
    DecayCertificate dc = decay_certificate(cfg_.body, cfg_.decay_radii, dirs, o);
    fit_keys(p, dc.fit);
    put(p + "two_sided", flag(o.two_sided));
    put(p + "directions", num(static_cast<double>(dirs.size())));
    put(p + "inflection_normals", num(static_cast<double>(flat.size())));
    put(p + "envelope_constant", dc.envelope_constant);
    put(p + "curvature_min", cc.min_curvature);
    put(p + "curvature_pass", flag(cc.pass));
    put(p + "curvature_location", num(cc.location[0]) + " " + num(cc.location[1]) + " " + num(cc.location[2]));
    bool consistent = dc.fit.pass == cc.pass;
    put(p + "consistent_with_curvature", flag(consistent));
    if (!cc.pass) v.warnings.push_back("curvature certificate fails: " + cc.message);
    if (!consistent) v.warnings.push_back("decay verdict disagrees with the curvature certificate");
    v.pass = dc.fit.pass;
    Csv csv(cfg_, "decay.csv", {"R", "envelope", "boundary_level"});
    for (std::size_t i = 0; i < dc.radii.size(); ++i) csv.row({dc.radii[i], dc.envelope[i], double(dc.levels[i])});
    csv.write(dir_, res_);
  }

  void energy(CertificateVerdict& v) {
    EnergyResult r = dyadic_energy(grid_, 2, -1, cfg_.tol_rate);
    fit_keys("energy.", r.fit);
    put("energy.fit_ok", flag(r.fit_ok));
    if (!r.fit_ok) v.warnings.push_back(r.note);
    v.pass = r.pass;
    Csv csv(cfg_, "energy.csv", {"j", "energy"});
    for (std::size_t i = 0; i < r.shells.size(); ++i) csv.row({double(r.shells[i]), r.energies[i]});
    csv.write(dir_, res_);
  }

  void identity(CertificateVerdict& v) {
    Csv csv(cfg_, "identity.csv",
            {"gamma", "fourier_side", "fourier_tail", "space_side", "space_stderr", "ratio", "calibrated_constant",
             "relative_error", "max_term_share", "converged"});
    v.pass = true;
    for (double g : cfg_.identity_gamma) {
      EnergyIdentity r = energy_integral_identity(grid_, cfg_.measure, g, cfg_.pairs_identity, cfg_.seed_identity,
                                                  cfg_.tol_identity);
      bool expect = g > d_ - cfg_.measure.similarity_dim();
      bool ok = expect ? r.pass : !r.converged;
      if (!expect) v.warnings.push_back("gamma " + short_num(g) + " <= d - s: checked for non-convergence");
      if (!r.note.empty()) v.warnings.push_back("gamma " + short_num(g) + ": " + r.note);
      std::string p = "identity.gamma_" + short_num(g) + ".";
      put(p + "fourier_side", r.fourier_side);
      put(p + "space_side", r.space_side);
      put(p + "space_stderr", r.space_stderr);
      put(p + "ratio", r.ratio);
      put(p + "calibrated_constant", r.calibrated_constant);
      put(p + "relative_error", r.relative_error);
      put(p + "converged", flag(r.converged));
      put(p + "pass", flag(ok));
      v.pass = v.pass && ok;
      csv.row({g, r.fourier_side, r.fourier_tail, r.space_side, r.space_stderr, r.ratio, r.calibrated_constant,
               r.relative_error, r.max_term_share, r.converged ? 1.0 : 0.0});
    }
    csv.write(dir_, res_);
  }

  void remainder(CertificateVerdict& v) {
    RemainderResult r = remainder_rate(grid_, bulk_, cfg_.eps, cfg_.tol_rate);
    fit_keys("remainder.", r.fit);
    put("remainder.hypothesis_met", flag(r.hypothesis_met));
    put("remainder.fit_ok", flag(r.fit_ok));
    put("remainder.truncation_tail", r.tail);
    put("remainder.sandwich_ratio", r.sandwich_ratio);
    if (!r.note.empty()) v.warnings.push_back(r.note);
    v.pass = r.pass;
    Csv csv(cfg_, "remainder.csv", {"eps", "sup_R", "sup_R_low", "sup_R_high"});
    for (std::size_t i = 0; i < r.eps.size(); ++i) csv.row({r.eps[i], r.sup_R[i], r.sup_low[i], r.sup_high[i]});
    csv.write(dir_, res_);
  }

  void agreement(CertificateVerdict& v) {
    const DensityProfile& pr = profile();
    const double eps = cfg_.agreement_eps;
    auto direct = nu_eps_direct_batch(cfg_.measure, cfg_.body, bulk_, eps, cfg_.pairs_agreement, cfg_.seed_agreement);
    Csv csv(cfg_, "agreement.csv",
            {"t", "M", "tail_bound", "nu_eps_direct", "stderr", "allowed", "deviation", "window_fourier"});
    std::size_t fails = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < bulk_.size(); ++i) {
      std::size_t k = first_ + i;
      double allowed = pr.tail_bound[k] + 3.0 * direct[i].standard_error;
      double dev = std::abs(pr.M[k] - direct[i].value);
      if (!(dev <= allowed)) ++fails;
      worst = std::max(worst, dev / allowed);
      double win = grid_.round && bulk_[i] + eps <= grid_.params.t_max ? window_average_fourier(grid_, bulk_[i], eps) : 0.0;
      csv.row({bulk_[i], pr.M[k], pr.tail_bound[k], direct[i].value, direct[i].standard_error, allowed, dev, win});
    }
    csv.write(dir_, res_);
    put("agreement.eps", eps);
    put("agreement.pairs", num(static_cast<double>(cfg_.pairs_agreement)));
    put("agreement.failures", num(static_cast<double>(fails)));
    put("agreement.worst_ratio", worst);
    put("agreement.exhaustive", flag(!direct.empty() && direct.front().exhaustive));
    v.pass = fails == 0;

    PairSampleStats h = distance_histogram(cfg_.measure, cfg_.body, cfg_.pairs_agreement, cfg_.histogram_bins,
                                           cfg_.seed_agreement, cfg_.diameter);
    Csv hc(cfg_, "histogram.csv", {"bin_left", "bin_right", "mass", "stderr"});
    for (std::size_t b = 0; b < h.bin_masses.size(); ++b)
      hc.row({h.bin_edges[b], h.bin_edges[b + 1], h.bin_masses[b], h.standard_errors[b]});
    hc.write(dir_, res_);
  }

  void mass(CertificateVerdict& v) {
    MassCheck m = mass_check(profile(), cfg_.tol_mass);
    put("mass.integral", m.mass);
    put("mass.tolerance", m.tolerance);
    put("mass.tail_integral", m.tail_integral);
    put("mass.quadrature_error", m.quadrature_error);
    put("mass.min_M", m.min_M);
    if (m.min_M < -1e-9) v.warnings.push_back("M takes negative values: min " + num(m.min_M));
    v.pass = m.pass;
  }

  void interval(CertificateVerdict& v) {
    intervals_ = interval_certificate(profile(), cfg_.interval_threshold);
    double longest = 0.0;
    for (const auto& iv : intervals_) longest = std::max(longest, iv.b - iv.a);
    put("interval.threshold", cfg_.interval_threshold);
    put("interval.count", num(static_cast<double>(intervals_.size())));
    put("interval.longest", longest);
    for (std::size_t i = 0; i < intervals_.size(); ++i)
      put("interval." + std::to_string(i), num(intervals_[i].a) + " " + num(intervals_[i].b));
    if (intervals_.empty()) v.warnings.push_back("no interval above the threshold");
    v.pass = !intervals_.empty() && longest >= cfg_.interval_min_length;
    Csv csv(cfg_, "intervals.csv", {"a", "b", "length"});
    for (const auto& iv : intervals_) csv.row({iv.a, iv.b, iv.b - iv.a});
    csv.write(dir_, res_);
  }

  void coverage(CertificateVerdict& v) {
    Csv csv(cfg_, "coverage.csv", {"a", "b", "cell_width", "cells", "gaps", "covered"});
    bool all = !intervals_.empty();
    for (std::size_t i = 0; i < intervals_.size(); ++i) {
      const Interval& iv = intervals_[i];
      double w = (iv.b - iv.a) / cfg_.coverage_cells;
      Coverage c = coverage_check(cfg_.measure, cfg_.body, iv.a, iv.b, w, cfg_.pairs_coverage, cfg_.seed_coverage);
      put("coverage." + std::to_string(i) + ".covered", flag(c.covered));
      put("coverage." + std::to_string(i) + ".gaps", num(static_cast<double>(c.gaps.size())));
      csv.row({iv.a, iv.b, w, double(c.cells), double(c.gaps.size()), c.covered ? 1.0 : 0.0});
      all = all && c.covered;
    }
    if (intervals_.empty()) v.warnings.push_back("nothing to corroborate: the interval certificate is empty");
    csv.write(dir_, res_);
    v.pass = all;
  }

  void holder(CertificateVerdict& v) {
    HolderResult h = holder_certificate(profile(), cfg_.holder_alpha, cfg_.measure.similarity_dim(), d_, first_, last_,
                                        cfg_.holder_octaves, cfg_.holder_growth);
    put("holder.alpha", h.alpha);
    put("holder.max_quotient", h.max_quotient);
    put("holder.growth", h.growth);
    put("holder.growth_limit", cfg_.holder_growth);
    put("holder.hypothesis_met", flag(h.hypothesis_met));
    Csv csv(cfg_, "holder.csv", {"separation", "octave_max", "cumulative_max"});
    for (std::size_t i = 0; i < h.separations.size(); ++i)
      csv.row({h.separations[i], h.octave_max[i], h.cumulative_max[i]});
    csv.write(dir_, res_);
    if (!h.hypothesis_met) {
      v.warnings.push_back("hypothesis not met: s <= (d+1)/2 + alpha, bound vacuous");
      v.pass = true;
    } else {
      v.pass = h.pass;
    }
  }

  void derivative(CertificateVerdict& v) {
    const int m = cfg_.derivative_order;
    const ConvexBody& body = cfg_.body;
    // analytic jet against a Richardson-extrapolated central difference
    std::map<int, BoundaryRule> rules;
    auto rule_for = [&](double freq) -> const BoundaryRule& {
      int lvl = resolving_level(body, freq);
      auto it = rules.find(lvl);
      if (it == rules.end()) it = rules.emplace(lvl, BoundaryRule(body, lvl)).first;
      return it->second;
    };
    Csv fd(cfg_, "derivative_fd.csv", {"t", "xi_norm", "analytic_re", "analytic_im", "fd_re", "fd_im", "error"});
    double worst = 0.0;
    for (int i = 0; i < cfg_.derivative_samples; ++i) {
      CounterRng rng(cfg_.seed_derivative, static_cast<std::uint64_t>(i));
      double t = 0.5 + rng.uniform();
      double rad = std::exp2(6.0 * rng.uniform());  // |xi| in [1, 64]
      Vec dir{};
      if (d_ == 2) {
        double a = kTwoPi * rng.uniform();
        dir = {std::cos(a), std::sin(a), 0.0};
      } else {
        double z = 2.0 * rng.uniform() - 1.0, a = kTwoPi * rng.uniform(), s = std::sqrt(1.0 - z * z);
        dir = {s * std::cos(a), s * std::sin(a), z};
      }
      Vec xi = scaled(dir, rad);
      // step in units of the oscillation scale; higher orders lose more to roundoff
      const double step[] = {1e-3, 1e-3, 1e-2, 3e-2};
      double h = step[m] / (1.0 + rad * body.r_max());
      const BoundaryRule& rule = rule_for((t + 2.0 * h) * rad);
      cdouble an = rule.scaled_jet(xi, t, m);
      cdouble num_d = richardson(rule, xi, t, h, m);
      double err = std::abs(an - num_d) / std::max(1.0, std::abs(an));
      worst = std::max(worst, err);
      fd.row({t, rad, an.real(), an.imag(), num_d.real(), num_d.imag(), err});
    }
    fd.write(dir_, res_);
    bool fd_ok = worst <= cfg_.tol_derivative;
    JetEnvelope env = jet_envelope(body, cfg_.derivative_radii, default_directions(d_, cfg_.decay_directions), m, 2.0,
                                   cfg_.tol_rate);
    Csv ec(cfg_, "derivative_envelope.csv", {"R", "normalised"});
    for (std::size_t i = 0; i < env.radii.size(); ++i) ec.row({env.radii[i], env.normalised[i]});
    ec.write(dir_, res_);
    put("derivative.order", num(m));
    put("derivative.fd_worst_error", worst);
    put("derivative.fd_pass", flag(fd_ok));
    put("derivative.envelope_exponent", env.fit.exponent);
    put("derivative.envelope_predicted", env.fit.predicted_exponent);
    put("derivative.envelope_spread", env.spread);
    put("derivative.envelope_pass", flag(env.pass));
    put("derivative.smoothness_order", num(smoothness_order(cfg_.measure.similarity_dim(), d_)));
    if (grid_.round) {
      double tm = ts_[ts_.size() / 2];
      DerivativeResult dr = density_derivative(grid_, tm, m);
      put("derivative.grid_t", tm);
      put("derivative.grid_value", dr.value);
      put("derivative.grid_tail_bound", dr.tail_bound);
      put("derivative.divergence_warning", flag(dr.warning));
      if (dr.warning) v.warnings.push_back(dr.note);
    } else {
      v.warnings.push_back("grid derivative of M skipped: needs a round body");
    }
    v.pass = fd_ok && env.pass;
  }

  // d^m/dt^m of t^(d-1) sigma^(t xi) from central differences, one
  // Richardson step; m = 1 only uses first differences.
  cdouble richardson(const BoundaryRule& rule, const Vec& xi, double t, double h, int m) const {
    auto f = [&](double s) { return std::pow(s, d_ - 1) * rule.transform(scaled(xi, s)); };
    auto D = [&](double hh) -> cdouble {
      switch (m) {
        case 1: return (f(t + hh) - f(t - hh)) / (2.0 * hh);
        case 2: return (f(t + hh) - 2.0 * f(t) + f(t - hh)) / (hh * hh);
        default: return (f(t + 2 * hh) - 2.0 * f(t + hh) + 2.0 * f(t - hh) - f(t - 2 * hh)) / (2.0 * hh * hh * hh);
      }
    };
    return (4.0 * D(0.5 * h) - D(h)) / 3.0;
  }

  void summary() {
    std::vector<std::string> failed, warned;
    for (const auto& v : res_.verdicts) {
      if (!v.pass) failed.push_back(v.claim);
      if (!v.warnings.empty()) warned.push_back(v.claim);
    }
    put("summary.certificates", num(static_cast<double>(res_.verdicts.size())));
    put("summary.failed_claims", join(failed));
    put("summary.warning_claims", join(warned));
    put("summary.pass", flag(failed.empty()));
    res_.exit_code = failed.empty() ? kExitPass : kExitCertificateFailure;
  }

  const ExperimentConfig& cfg_;
  RunResult& res_;
  std::filesystem::path dir_;
  int d_;
  SpectralGrid grid_;
  std::vector<double> ts_, bulk_;
  std::size_t first_ = 0, last_ = 0;
  DensityProfile profile_;
  bool profile_ready_ = false;
  std::vector<Interval> intervals_;
};

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  RunResult res;
  res.output_dir = !out_dir.empty() ? out_dir : !cfg.output_dir.empty() ? cfg.output_dir : default_output_dir();
  std::filesystem::path dir(res.output_dir);
  std::filesystem::create_directories(dir);
  Runner(cfg, res, dir).run();
  std::ofstream v(dir / "verdict.txt");
  if (!v) throw std::runtime_error("cannot write " + (dir / "verdict.txt").string());
  for (const auto& [k, val] : res.report) v << k << " = " << val << "\n";
  res.files.push_back("verdict.txt");
  return res;
}

}  // namespace distlab
