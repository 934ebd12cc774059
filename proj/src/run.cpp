#include "qimpact/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "json.hpp"
#include "qimpact/classical.hpp"
#include "qimpact/diagnostics.hpp"
#include "qimpact/io.hpp"
#include "qimpact/observables.hpp"
#include "qimpact/otoc.hpp"
#include "qimpact/propagator.hpp"
#include "qimpact/qle.hpp"
#include "qimpact/spectral.hpp"

namespace qimpact {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

// Relative fluctuation below which a series carries no dynamics: its spectrum
// and 0-1 statistic would only measure roundoff noise.
constexpr double kStaticSeriesTol = 1e-8;

struct Emitter {
  std::filesystem::path dir;
  std::vector<Artifact> artifacts;

  void csv(const std::string& name, const std::string& header,
           const std::vector<std::vector<double>>& rows) {
    const auto path = (dir / name).string();
    write_csv(path, header, rows);
    artifacts.push_back({name, checksum_file(path)});
  }
  void text(const std::string& name, const std::string& contents) {
    const auto path = (dir / name).string();
    write_file(path, contents);
    artifacts.push_back({name, checksum_file(path)});
  }
};

bool is_static_series(const TimeSeries& s) {
  return s.stddev() < kStaticSeriesTol * std::max(1.0, std::abs(s.mean()));
}

int count_peaks_above(const Spectrum& spec, double fraction) {
  const int n = static_cast<int>(spec.amps.size());
  if (n < 3) return 0;
  double top = 0.0;
  for (double a : spec.amps) top = std::max(top, a);
  if (top <= 0.0) return 0;
  int count = 0;
  for (int i = 1; i + 1 < n; ++i)
    if (spec.amps[i] > spec.amps[i - 1] && spec.amps[i] > spec.amps[i + 1] &&
        spec.amps[i] > fraction * top)
      ++count;
  return count;
}

// Number of mutually inharmonic peak frequencies above `fraction` of the
// spectral maximum. A peak sitting on an integer multiple of an already
// accepted (stronger) line counts as its overtone, not as a new frequency, so
// a strictly periodic signal scores 1 however many overtones clear the
// threshold. The tolerance scales with the harmonic order because the
// fundamental itself is only known to one resolution bin.
int count_fundamentals(const Spectrum& spec, double fraction) {
  const int n = static_cast<int>(spec.amps.size());
  if (n < 3) return 0;
  double top = 0.0;
  for (double a : spec.amps) top = std::max(top, a);
  if (top <= 0.0) return 0;

  struct Peak {
    double f, a;
  };
  std::vector<Peak> peaks;
  for (int i = 1; i + 1 < n; ++i)
    if (spec.amps[i] > spec.amps[i - 1] && spec.amps[i] > spec.amps[i + 1] &&
        spec.amps[i] > fraction * top && spec.freqs[i] > 0.0)
      peaks.push_back({spec.freqs[i], spec.amps[i]});
  std::sort(peaks.begin(), peaks.end(),
            [](const Peak& l, const Peak& r) { return l.a > r.a; });

  const double df = n > 1 ? spec.freqs[1] - spec.freqs[0] : 0.0;
  std::vector<double> fundamentals;
  for (const Peak& p : peaks) {
    bool overtone = false;
    for (double f0 : fundamentals) {
      const double k = std::round(p.f / f0);
      if (k >= 1.0 && std::abs(p.f - k * f0) <= (k + 1.0) * df) {
        overtone = true;
        break;
      }
    }
    if (!overtone) fundamentals.push_back(p.f);
  }
  return static_cast<int>(fundamentals.size());
}

std::vector<std::vector<double>> spectrum_rows(const Spectrum& s) {
  std::vector<std::vector<double>> rows;
  rows.reserve(s.freqs.size());
  for (size_t i = 0; i < s.freqs.size(); ++i) rows.push_back({s.freqs[i], s.amps[i]});
  return rows;
}

std::vector<std::vector<double>> series_rows(const TimeSeries& s) {
  std::vector<std::vector<double>> rows;
  rows.reserve(s.values.size());
  for (int i = 0; i < s.size(); ++i)
    rows.push_back({s.t0 + i * s.dt_sample, s.values[i]});
  return rows;
}

std::vector<double> scan_values(double lo, double hi, double step) {
  std::vector<double> xs;
  const int n = static_cast<int>(std::floor((hi - lo) / step + 0.5)) + 1;
  for (int i = 0; i < n; ++i) xs.push_back(lo + i * step);
  return xs;
}

// Asymptotic largest-exponent estimate from the mean log-divergence curve of
// embedded neighbor pairs. Chaotic series separate exponentially (curve
// linear in time up to saturation); regular and strange-nonchaotic series
// separate at most algebraically (curve linear in log time). The exponential
// model must beat the algebraic one decisively (half the residual) to claim
// a positive exponent, otherwise the exponential rate is zero.
struct DivergenceEstimate {
  std::vector<std::vector<double>> curve;  // (t, mean ln d)
  double lambda = 0.0;
  bool exponential = false;
};

DivergenceEstimate divergence_exponent(const TimeSeries& s) {
  const int n = s.size();
  const std::vector<double>& v = s.values;
  const int delay = autocorrelation_first_minimum(v);
  const int embed = 3;
  const int span = (embed - 1) * delay;
  const int kmax = std::min(n / 20, 2000);
  const int n_vec = n - span - kmax;
  if (kmax < 20 || n_vec < 100) throw TooShort("divergence_exponent: series too short");

  const double mean = s.mean();
  int crossings = 0;
  for (int i = 1; i < n; ++i)
    if ((v[i] - mean) * (v[i - 1] - mean) < 0.0) ++crossings;
  const int exclusion = crossings > 0 ? std::max(1, 2 * n / crossings) : n / 10;

  auto dist2 = [&](int a, int b) {
    double acc = 0.0;
    for (int d = 0; d < embed; ++d) {
      const double diff = v[a + d * delay] - v[b + d * delay];
      acc += diff * diff;
    }
    return acc;
  };

  const int stride = std::max(1, n_vec / 2000);
  std::vector<double> curve(kmax + 1, 0.0);
  int cnt = 0;
  for (int i = 0; i < n_vec; i += stride) {
    int best = -1;
    double bd = 0.0;
    for (int j = 0; j < n_vec; ++j) {
      if (std::abs(i - j) < exclusion) continue;
      const double d2 = dist2(i, j);
      if (best < 0 || d2 < bd) {
        best = j;
        bd = d2;
      }
    }
    if (best < 0 || bd <= 0.0) continue;
    bool ok = true;
    std::vector<double> row(kmax + 1);
    for (int k = 0; k <= kmax; ++k) {
      const double d2 = dist2(i + k, best + k);
      if (d2 <= 0.0) {
        ok = false;
        break;
      }
      row[k] = 0.5 * std::log(d2);
    }
    if (!ok) continue;
    for (int k = 0; k <= kmax; ++k) curve[k] += row[k];
    ++cnt;
  }
  if (cnt == 0) throw TooShort("divergence_exponent: no usable neighbor pairs");
  for (double& c : curve) c /= cnt;

  // Growth segment: up to where the curve first comes within 0.3 nats of its
  // maximum (saturation at the attractor scale).
  const double cmax = *std::max_element(curve.begin(), curve.end());
  int ksat = kmax;
  for (int k = 1; k <= kmax; ++k)
    if (curve[k] > cmax - 0.3) {
      ksat = k;
      break;
    }
  ksat = std::max(ksat, 10);

  auto fit = [](const std::vector<double>& xs, const std::vector<double>& ys) {
    const int m = static_cast<int>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < m; ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    const double b = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double a = (sy - b * sx) / m;
    double sse = 0.0;
    for (int i = 0; i < m; ++i) {
      const double r = ys[i] - a - b * xs[i];
      sse += r * r;
    }
    return std::pair<double, double>(b, sse);
  };
  std::vector<double> xt, xl, y;
  for (int k = 1; k <= ksat; ++k) {
    xt.push_back(k * s.dt_sample);
    xl.push_back(std::log(k * s.dt_sample));
    y.push_back(curve[k]);
  }
  const auto [slope_exp, sse_exp] = fit(xt, y);
  const auto [slope_alg, sse_alg] = fit(xl, y);

  DivergenceEstimate out;
  for (int k = 0; k <= kmax; ++k)
    out.curve.push_back({k * s.dt_sample, curve[k]});
  out.exponential = sse_exp < 0.5 * sse_alg && slope_exp > 0.0;
  out.lambda = out.exponential ? slope_exp : 0.0;
  return out;
}

Grid experiment_grid(const ExperimentConfig& c) {
  // Hard-wall variants keep the right grid end exactly on the wall.
  double hi = c.x_max;
  if (c.potential.variant != PotentialVariant::SoftSigmoidWall) hi = c.potential.x_w;
  return build_grid(c.x_min, hi, c.grid_n);
}

// ---------------------------------------------------------------------------

void run_eigen(const ExperimentConfig& c, Emitter& out, json& summary) {
  const Grid grid = experiment_grid(c);
  EigenBasis basis = eigensolve(c.potential, grid, c.n_states);
  std::vector<std::vector<double>> rows;
  for (int n = 0; n < basis.n_states; ++n)
    rows.push_back({static_cast<double>(n), basis.energies[n]});
  out.csv("energies.csv", "n,energy", rows);
  summary["n_states"] = basis.n_states;
  summary["e0"] = basis.energies[0];
}

void run_evolve(const ExperimentConfig& c, Emitter& out, json& summary) {
  const Grid grid = experiment_grid(c);
  Propagator prop(c.potential, grid);
  WaveState psi0 = gaussian_packet(grid, c.packet_mean, c.packet_variance,
                                   c.packet_momentum, c.potential.hbar);
  auto states = prop.evolve(psi0, c.t_end, c.dt, c.sample_stride);

  std::vector<std::vector<double>> rows;
  for (const auto& w : states) {
    const Moments mom = expectations(w, c.potential.hbar);
    rows.push_back({w.t, w.norm_sq(), entropy(w), mom.x, mom.p, mom.x2, mom.p2});
  }
  out.csv("observables.csv", "t,norm,entropy,x,p,x2,p2", rows);

  const WaveState& last = states.back();
  std::vector<std::vector<double>> density;
  for (int i = 0; i < grid.n; ++i)
    density.push_back({grid.x(i), std::norm(last.psi[i])});
  out.csv("density_final.csv", "x,rho", density);
  summary["n_snapshots"] = states.size();
  summary["final_norm"] = last.norm_sq();
}

void run_unforced(const ExperimentConfig& c, Emitter& out, json& summary) {
  struct Case {
    std::string tag;
    double x_w;
  };
  const double far = std::abs(c.x_min);  // wall the released packet never reaches
  const std::vector<Case> cases = {
      {"xw0", 0.0}, {"xw5", 5.0}, {"xw6", 6.0}, {"far", far}};

  std::vector<double> times;
  for (double t = 0.0; t <= c.t_end + 1e-9 * c.dt; t += c.dt) times.push_back(t);

  json rows = json::array();
  for (const auto& cs : cases) {
    PotentialSpec spec = c.potential;
    spec.variant = PotentialVariant::HardWall;
    spec.x_w = cs.x_w;
    const Grid grid = build_grid(c.x_min, cs.x_w, c.grid_n);
    EigenBasis basis = eigensolve(spec, grid, c.n_states);
    WaveState psi0 = gaussian_packet(grid, c.packet_mean, c.packet_variance,
                                     c.packet_momentum, spec.hbar);
    // Evolve in blocks so long runs never hold the full snapshot history.
    TimeSeries ent;
    ent.dt_sample = c.dt;
    ent.values.reserve(times.size());
    const size_t chunk = 8192;
    for (size_t start = 0; start < times.size(); start += chunk) {
      const size_t stop = std::min(start + chunk, times.size());
      const std::vector<double> block(times.begin() + start, times.begin() + stop);
      for (const auto& w : evolve_static(basis, psi0, block, spec.hbar))
        ent.values.push_back(entropy(w));
    }
    out.csv("entropy_" + cs.tag + ".csv", "t,entropy", series_rows(ent));

    json row;
    row["x_w"] = cs.x_w;
    row["tag"] = cs.tag;
    row["entropy_mean"] = ent.mean();
    row["entropy_stddev"] = ent.stddev();
    if (is_static_series(ent)) {
      // Constant series: no dynamics above roundoff, trivially regular.
      row["static"] = true;
      row["K_median"] = 0.0;
      row["n_peaks_1pct"] = 0;
      row["n_peaks_10pct"] = 0;
      row["n_fundamentals_10pct"] = 0;
    } else {
      row["static"] = false;
      Spectrum spec_s = power_spectrum(ent);
      out.csv("spectrum_" + cs.tag + ".csv", "freq,amplitude", spectrum_rows(spec_s));
      ZeroOneResult z = zero_one_test(ent, ZeroOneMode::Standard, 100, c.seed);
      row["K_median"] = z.K_median;
      row["n_peaks_1pct"] = count_peaks_above(spec_s, 0.01);
      row["n_peaks_10pct"] = count_peaks_above(spec_s, 0.10);
      row["n_fundamentals_10pct"] = count_fundamentals(spec_s, 0.10);
    }
    rows.push_back(row);
  }
  summary["cases"] = rows;
}

void run_forced(const ExperimentConfig& c, Emitter& out, json& summary) {
  const Grid grid = experiment_grid(c);
  Propagator prop(c.potential, grid);
  // Lanczos exponentials conserve the norm exactly at any truncation; the
  // tolerance only bounds per-exponential phase error. 1e-9 over ~1e5 steps
  // keeps the accumulated phase error orders below the entropy diagnostics'
  // sensitivity while cutting the Krylov dimension substantially.
  prop.krylov.tol = 1e-9;
  WaveState psi0 = gaussian_packet(grid, c.packet_mean, c.packet_variance,
                                   c.packet_momentum, c.potential.hbar);
  auto states = prop.evolve(psi0, c.t_end, c.dt, c.sample_stride);
  TimeSeries ent = entropy_series(states, c.dt * c.sample_stride);
  out.csv("entropy.csv", "t,entropy", series_rows(ent));

  if (is_static_series(ent)) {
    // Constant series: no dynamics above roundoff, trivially regular.
    summary["static"] = true;
    summary["K_median_modified"] = 0.0;
    summary["nsigma_exponent"] = 0.0;
    summary["ftle_positive_fraction"] = 0.0;
    summary["lyapunov_full_series"] = 0.0;
    summary["n_samples"] = ent.size();
    return;
  }
  summary["static"] = false;

  Spectrum spec = power_spectrum(ent);
  out.csv("spectrum.csv", "freq,amplitude", spectrum_rows(spec));

  SpectralDistribution nsigma = spectral_distribution(spec);
  std::vector<std::vector<double>> nrows;
  for (size_t i = 0; i < nsigma.sigmas.size(); ++i)
    nrows.push_back({nsigma.sigmas[i], static_cast<double>(nsigma.counts[i])});
  out.csv("nsigma.csv", "sigma,count", nrows);

  ZeroOneResult z = zero_one_test(ent, ZeroOneMode::Modified, 100, c.seed);
  std::vector<std::vector<double>> krows;
  for (size_t i = 0; i < z.c_values.size(); ++i)
    krows.push_back({z.c_values[i], z.K_values[i]});
  out.csv("zero_one.csv", "c,K", krows);

  const int short_window = 50;
  FtleDistribution ftle = finite_time_lyapunov(ent, 3, 0, short_window);
  std::vector<std::vector<double>> frows;
  for (double e : ftle.exponents) frows.push_back({e});
  out.csv("ftle.csv", "exponent", frows);

  auto mean_of = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / v.size();
  };

  DivergenceEstimate div = divergence_exponent(ent);
  out.csv("divergence.csv", "t,mean_ln_distance", div.curve);

  summary["nsigma_exponent"] = nsigma.exponent;
  summary["nsigma_stderr"] = nsigma.stderr_exponent;
  summary["K_median_modified"] = z.K_median;
  summary["ftle_positive_fraction"] = ftle.positive_fraction;
  summary["ftle_mean"] = mean_of(ftle.exponents);
  summary["lyapunov_full_series"] = div.lambda;
  summary["divergence_exponential"] = div.exponential;
  summary["n_samples"] = ent.size();
}

void run_otoc(const ExperimentConfig& c, Emitter& out, json& summary) {
  std::vector<double> times;
  for (double t = c.dt; t <= c.t_end + 1e-9 * c.dt; t += c.dt) times.push_back(t);
  std::vector<double> betas = c.betas.empty() ? std::vector<double>{0.5} : c.betas;
  const int n_thermal = c.n_thermal > 0 ? c.n_thermal : c.n_states / 5;
  const double fit_t_start = 5.0 * c.dt;

  // The curve at the configured wall position, first beta.
  PotentialSpec spec = c.potential;
  EigenBasis basis = otoc_basis(spec, c.n_states, c.grid_n);
  OtocCurve curve = thermal_otoc(basis, betas[0], times, n_thermal, spec.m, spec.hbar);
  std::vector<std::vector<double>> crows;
  for (size_t i = 0; i < curve.times.size(); ++i)
    crows.push_back({curve.times[i], curve.values[i]});
  out.csv("otoc_curve.csv", "t,C", crows);
  OtocFit curve_fit = otoc_growth_fit(curve.times, curve.values, fit_t_start);

  // Wall-position sweep.
  std::vector<PotentialSpec> specs;
  for (double x_w : scan_values(c.scan_lo, c.scan_hi, c.scan_step)) {
    PotentialSpec s = c.potential;
    s.x_w = x_w;
    specs.push_back(s);
  }
  std::vector<std::vector<double>> rows;
  if (!specs.empty()) {
    auto scan = otoc_growth_scan(specs, betas, times, c.n_states, n_thermal, fit_t_start);
    for (const auto& r : scan)
      rows.push_back({r.x_w, r.beta, r.fit.exponent, r.fit.stderr_exponent,
                      r.fit.loglog_residual, r.fit.semilog_residual,
                      r.fit.periodic ? 1.0 : 0.0});
  }
  out.csv("otoc_scan.csv",
          "x_w,beta,exponent,stderr,loglog_residual,semilog_residual,periodic", rows);

  summary["curve_x_w"] = spec.x_w;
  summary["curve_beta"] = betas[0];
  summary["curve_exponent"] = curve_fit.exponent;
  summary["curve_periodic"] = curve_fit.periodic;
  summary["curve_loglog_residual"] = curve_fit.loglog_residual;
  summary["curve_semilog_residual"] = curve_fit.semilog_residual;
  summary["n_scan_points"] = rows.size();
}

void run_qle(const ExperimentConfig& c, Emitter& out, json& summary) {
  NoiseModel noise;
  noise.kT = c.noise_kT;
  noise.Gamma = c.noise_Gamma;
  noise.tau_c = c.noise_tau_c;
  QleScanOptions opts;
  opts.dt = c.dt;
  opts.n_realizations = c.n_realizations;
  opts.T_lyap = c.T_lyap;
  opts.seed = c.seed;
  auto points = bifurcation_scan(c.scan_lo, c.scan_hi, c.scan_step, c.potential,
                                 noise, opts);
  std::vector<std::vector<double>> rows, section;
  for (const auto& p : points) {
    rows.push_back({p.x_w, p.mean_lambda, p.std_lambda, p.K_median,
                    static_cast<double>(p.section.size())});
    for (size_t i = 0; i < p.section.size(); ++i)
      section.push_back({p.x_w, static_cast<double>(i), p.section[i]});
  }
  out.csv("qle_scan.csv", "x_w,mean_lambda,std_lambda,K_median,n_section", rows);
  out.csv("qle_section.csv", "x_w,index,X", section);
  summary["n_scan_points"] = points.size();
}

void run_classical(const ExperimentConfig& c, Emitter& out, json& summary) {
  ClassicalParams params;
  params.k = c.potential.k;
  params.m = c.potential.m;
  params.A_f = c.potential.A_f;
  params.omega_f = c.potential.omega_f;
  params.r = c.restitution;
  auto points = bifurcation_classical(c.scan_lo, c.scan_hi, c.scan_step, params,
                                      /*continuation=*/false);
  std::vector<std::vector<double>> rows;
  for (const auto& p : points)
    for (size_t i = 0; i < p.strobe.size(); ++i)
      rows.push_back({p.x_w, static_cast<double>(i), p.strobe[i], p.lambda});
  out.csv("classical_scan.csv", "x_w,sample_index,x_strobe,lambda_max", rows);
  summary["n_scan_points"] = points.size();
}

TimeSeries read_series_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  std::vector<double> ts, vs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string a, b;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',')) continue;
    try {
      const double t = std::stod(a);
      const double v = std::stod(b);
      ts.push_back(t);
      vs.push_back(v);
    } catch (const std::exception&) {
      continue;  // header or malformed line
    }
  }
  if (ts.size() < 2) throw ConfigInvalid("diagnose: input has fewer than 2 samples");
  TimeSeries s;
  s.values = std::move(vs);
  s.t0 = ts.front();
  s.dt_sample = ts[1] - ts[0];
  if (!(s.dt_sample > 0.0)) throw ConfigInvalid("diagnose: non-increasing time column");
  return s;
}

void run_diagnose(const ExperimentConfig& c, Emitter& out, json& summary) {
  if (c.input_path.empty()) throw ConfigInvalid("diagnose: input_path is required");
  TimeSeries series = read_series_csv(c.input_path);
  Spectrum spec = power_spectrum(series);
  out.csv("spectrum.csv", "freq,amplitude", spectrum_rows(spec));
  ZeroOneResult zs = zero_one_test(series, ZeroOneMode::Standard, 100, c.seed);
  ZeroOneResult zm = zero_one_test(series, ZeroOneMode::Modified, 100, c.seed);
  summary["n_samples"] = series.size();
  summary["K_median_standard"] = zs.K_median;
  summary["K_median_modified"] = zm.K_median;
  summary["n_peaks_1pct"] = count_peaks_above(spec, 0.01);
  try {
    FtleDistribution ftle = finite_time_lyapunov(series, 3, 0, 50);
    summary["ftle_positive_fraction"] = ftle.positive_fraction;
  } catch (const Error& e) {
    summary["ftle_error"] = e.what();
  }
}

}  // namespace

std::string resolve_output_dir(const ExperimentConfig& config) {
  if (const char* env = std::getenv("QIMPACT_OUT"); env && *env) return env;
  return config.output_dir;
}

RunManifest run(const ExperimentConfig& config) {
  validate_config(config);
  const auto t_begin = std::chrono::steady_clock::now();

  Emitter out;
  out.dir = resolve_output_dir(config);
  std::filesystem::create_directories(out.dir);

  out.text("config.json", config_to_json_text(config));

  json summary;
  summary["experiment"] = config.experiment;
  if (config.experiment == "eigen") run_eigen(config, out, summary);
  else if (config.experiment == "evolve") run_evolve(config, out, summary);
  else if (config.experiment == "unforced") run_unforced(config, out, summary);
  else if (config.experiment == "forced") run_forced(config, out, summary);
  else if (config.experiment == "otoc") run_otoc(config, out, summary);
  else if (config.experiment == "qle") run_qle(config, out, summary);
  else if (config.experiment == "classical") run_classical(config, out, summary);
  else if (config.experiment == "diagnose") run_diagnose(config, out, summary);
  else throw ConfigInvalid("unknown experiment: " + config.experiment);

  out.text("summary.json", summary.dump(2) + "\n");

  RunManifest manifest;
  manifest.config_hash = config_hash(config);
  manifest.version = kVersion;
  manifest.artifacts = std::move(out.artifacts);
  std::sort(manifest.artifacts.begin(), manifest.artifacts.end(),
            [](const Artifact& a, const Artifact& b) { return a.name < b.name; });
  manifest.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin)
          .count();
  write_file((out.dir / "manifest.json").string(), manifest_to_json_text(manifest));
  return manifest;
}

std::string manifest_to_json_text(const RunManifest& manifest) {
  json j;
  j["config_hash"] = manifest.config_hash;
  j["version"] = manifest.version;
  j["wall_seconds"] = manifest.wall_seconds;
  json arts = json::array();
  for (const auto& a : manifest.artifacts)
    arts.push_back({{"name", a.name}, {"checksum", a.checksum}});
  j["artifacts"] = arts;
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("manifest parse error: ") + e.what());
  }
  RunManifest m;
  m.config_hash = j.at("config_hash").get<std::string>();
  m.version = j.at("version").get<std::string>();
  m.wall_seconds = j.at("wall_seconds").get<double>();
  for (const auto& a : j.at("artifacts"))
    m.artifacts.push_back(
        {a.at("name").get<std::string>(), a.at("checksum").get<std::string>()});
  return m;
}

}  // namespace qimpact
