#include "qimpact/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "qimpact/errors.hpp"
#include "qimpact/fft.hpp"

namespace qimpact {

namespace {

int next_pow2(int n) {
  int m = 1;
  while (m < n) m *= 2;
  return m;
}

std::vector<std::complex<double>> fft_inverse(std::vector<std::complex<double>> in) {
  for (auto& z : in) z = std::conj(z);
  auto out = fft_forward(in);
  const double inv = 1.0 / in.size();
  for (auto& z : out) z = std::conj(z) * inv;
  return out;
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  const int n = static_cast<int>(xs.size());
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// K_c of the correlation-method 0-1 test; the displacement autocorrelation
// is evaluated with FFTs so long series stay cheap.
double zero_one_K(const std::vector<double>& phi, double c, double noise_amp,
                  std::mt19937_64& rng) {
  const int n = static_cast<int>(phi.size());
  const int ncut = n / 10;

  std::vector<std::complex<double>> traj(n);
  std::complex<double> acc(0.0, 0.0);
  double phi_mean = 0.0;
  for (int j = 0; j < n; ++j) {
    acc += phi[j] * std::polar(1.0, (j + 1) * c);
    traj[j] = acc;
    phi_mean += phi[j];
  }
  phi_mean /= n;

  std::vector<double> abs2_prefix(n + 1, 0.0);
  for (int j = 0; j < n; ++j)
    abs2_prefix[j + 1] = abs2_prefix[j] + std::norm(traj[j]);

  // A(m) = sum_j conj(traj_j) traj_{j+m} through a zero-padded correlation.
  const int m = next_pow2(2 * n);
  std::vector<std::complex<double>> padded(m, {0.0, 0.0});
  std::copy(traj.begin(), traj.end(), padded.begin());
  auto spec = fft_forward(padded);
  for (auto& z : spec) z = std::complex<double>(std::norm(z), 0.0);
  auto corr = fft_inverse(std::move(spec));

  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> ns(ncut), ds(ncut);
  for (int lag = 1; lag <= ncut; ++lag) {
    const double sum_sq = (abs2_prefix[n] - abs2_prefix[lag]) + abs2_prefix[n - lag];
    const double msd = (sum_sq - 2.0 * corr[lag].real()) / (n - lag);
    const double osc =
        phi_mean * phi_mean * (1.0 - std::cos(lag * c)) / (1.0 - std::cos(c));
    ns[lag - 1] = lag;
    ds[lag - 1] = msd - osc + (noise_amp > 0.0 ? noise_amp * gauss(rng) : 0.0);
  }
  return pearson(ns, ds);
}

}  // namespace

Spectrum power_spectrum(const TimeSeries& series, Taper window) {
  const int n = series.size();
  if (n < 64) throw TooShort("power_spectrum: need at least 64 samples");
  const double mean = series.mean();

  std::vector<std::complex<double>> buf(n);
  for (int i = 0; i < n; ++i) {
    double w = 1.0;
    if (window == Taper::Hann)
      w = 0.5 * (1.0 - std::cos(2.0 * M_PI * i / (n - 1)));
    buf[i] = {(series.values[i] - mean) * w, 0.0};
  }
  auto spec = fft_forward(buf);

  Spectrum out;
  const int half = n / 2;
  out.freqs.reserve(half + 1);
  out.amps.reserve(half + 1);
  for (int k = 0; k <= half; ++k) {
    out.freqs.push_back(k / (n * series.dt_sample));
    out.amps.push_back(std::abs(spec[k]) / n);
  }
  return out;
}

SpectralDistribution spectral_distribution(const Spectrum& spec,
                                           std::vector<double> sigma_grid) {
  std::vector<double> peaks;
  for (size_t k = 1; k + 1 < spec.amps.size(); ++k)
    if (spec.amps[k] > spec.amps[k - 1] && spec.amps[k] > spec.amps[k + 1])
      peaks.push_back(spec.amps[k]);
  if (peaks.size() < 20)
    throw TooFewPeaks("spectral_distribution: " + std::to_string(peaks.size()) +
                      " peaks, need 20");
  std::sort(peaks.begin(), peaks.end());

  if (sigma_grid.empty()) {
    // Log-spaced thresholds across the central scaling region, away from the
    // noise floor and from the handful of largest peaks.
    const double lo = peaks[static_cast<size_t>(0.20 * (peaks.size() - 1))];
    const double hi = peaks[static_cast<size_t>(0.90 * (peaks.size() - 1))];
    if (!(lo > 0.0) || !(hi > lo))
      throw NonPositiveData("spectral_distribution: degenerate peak amplitudes");
    const int n_sigma = 30;
    for (int i = 0; i < n_sigma; ++i)
      sigma_grid.push_back(
          lo * std::exp(std::log(hi / lo) * i / double(n_sigma - 1)));
  }

  SpectralDistribution out;
  std::vector<double> lx, ly;
  for (double sigma : sigma_grid) {
    const int count = static_cast<int>(
        peaks.end() - std::upper_bound(peaks.begin(), peaks.end(), sigma));
    out.sigmas.push_back(sigma);
    out.counts.push_back(count);
    if (count > 0 && sigma > 0.0) {
      lx.push_back(sigma);
      ly.push_back(count);
    }
  }
  PowerLawFit fit = power_law_fit(lx, ly);
  out.exponent = fit.exponent;
  out.stderr_exponent = fit.stderr_exponent;
  return out;
}

ZeroOneResult zero_one_test(const TimeSeries& series, ZeroOneMode mode, int n_c,
                            std::uint64_t seed) {
  if (series.size() < 2000)
    throw TooShort("zero_one_test: need at least 2000 samples");
  if (n_c < 1) throw Error("zero_one_test: n_c must be positive");

  const double band_lo = M_PI / 5.0, band_hi = 4.0 * M_PI / 5.0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(band_lo, band_hi);
  const double golden = (std::sqrt(5.0) + 1.0) / 2.0;
  const double noise_amp =
      mode == ZeroOneMode::Modified ? 0.5e-2 * series.stddev() : 0.0;

  ZeroOneResult out;
  out.mode = mode;
  for (int k = 1; k <= n_c; ++k) {
    double c;
    if (mode == ZeroOneMode::Standard) {
      c = uni(rng);
    } else {
      const double frac = k * golden - std::floor(k * golden);
      c = band_lo + frac * (band_hi - band_lo);
    }
    out.c_values.push_back(c);
    out.K_values.push_back(zero_one_K(series.values, c, noise_amp, rng));
  }
  out.K_median = median(out.K_values);
  return out;
}

int autocorrelation_first_minimum(const std::vector<double>& values) {
  const int n = static_cast<int>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double prev = 0.0;
  const int max_lag = n / 2;
  for (int lag = 0; lag <= max_lag; ++lag) {
    double acc = 0.0;
    for (int i = 0; i + lag < n; ++i)
      acc += (values[i] - mean) * (values[i + lag] - mean);
    acc /= (n - lag);
    if (lag >= 2 && acc > prev) return lag - 1;
    prev = acc;
  }
  return std::max(1, max_lag);
}

FtleDistribution finite_time_lyapunov(const TimeSeries& series, int embed_dim,
                                      int delay, int window) {
  const int n = series.size();
  if (delay <= 0) delay = autocorrelation_first_minimum(series.values);
  if (embed_dim < 2 || window < 1) throw Error("finite_time_lyapunov: bad parameters");
  if (n < embed_dim * delay + 10 * window)
    throw TooShort("finite_time_lyapunov: series shorter than embed_dim*delay + 10*window");

  const std::vector<double>& v = series.values;
  const int span = (embed_dim - 1) * delay;
  const int n_vec = n - span - window;

  // Temporal exclusion: one mean period, estimated from sign changes of the
  // mean-removed series.
  const double mean = series.mean();
  int crossings = 0;
  for (int i = 1; i < n; ++i)
    if ((v[i] - mean) * (v[i - 1] - mean) < 0.0) ++crossings;
  const int exclusion = crossings > 0 ? std::max(1, 2 * n / crossings) : n / 10;

  auto dist2 = [&](int a, int b) {
    double acc = 0.0;
    for (int d = 0; d < embed_dim; ++d) {
      const double diff = v[a + d * delay] - v[b + d * delay];
      acc += diff * diff;
    }
    return acc;
  };

  FtleDistribution out;
  out.window_length = window;
  // Distances at roundoff scale (exact recurrences) carry no growth signal.
  const double eps2 = std::pow(1e-8 * series.stddev(), 2);
  int zero_neighbors = 0;
  // Cap the number of reference points: the all-pairs neighbor search is
  // quadratic and the distribution statistics converge far earlier.
  const int ref_stride = std::max(1, n_vec / 8192);
  int n_refs = 0;
  for (int i = 0; i < n_vec; i += ref_stride) {
    ++n_refs;
    int best = -1;
    double best_d2 = 0.0;
    for (int j = 0; j < n_vec; ++j) {
      if (std::abs(i - j) < exclusion) continue;
      const double d2 = dist2(i, j);
      if (best < 0 || d2 < best_d2) {
        best = j;
        best_d2 = d2;
      }
    }
    if (best < 0) continue;
    if (best_d2 <= eps2) {
      ++zero_neighbors;
      continue;
    }
    // Least-squares slope of ln d(k) over the window (Rosenstein-style):
    // unlike the two-point ratio ln(d_w/d_0)/w it is unbiased for bounded
    // regular signals, whose neighbor distances oscillate instead of growing.
    const int kstep = std::max(1, window / 64);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int np = 0;
    bool degenerate = false;
    for (int k = 0; k <= window; k += kstep) {
      const double d2 = k == 0 ? best_d2 : dist2(i + k, best + k);
      if (d2 <= 0.0) {
        degenerate = true;
        break;
      }
      const double x = k * series.dt_sample;
      const double y = 0.5 * std::log(d2);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++np;
    }
    if (degenerate || np < 2) continue;
    const double denom = np * sxx - sx * sx;
    if (denom == 0.0) continue;
    out.exponents.push_back((np * sxy - sx * sy) / denom);
  }
  if (2 * zero_neighbors > n_refs)
    throw DegenerateEmbedding("finite_time_lyapunov: over half of neighbor distances are 0");
  if (out.exponents.empty())
    throw TooShort("finite_time_lyapunov: no usable reference points");

  int positive = 0;
  for (double l : out.exponents)
    if (l > 0.0) ++positive;
  out.positive_fraction = double(positive) / out.exponents.size();
  return out;
}

PowerLawFit power_law_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  const int n = static_cast<int>(xs.size());
  if (n < 4 || ys.size() != xs.size())
    throw Error("power_law_fit: need at least 4 (x, y) pairs");
  for (int i = 0; i < n; ++i)
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
      throw NonPositiveData("power_law_fit: data must be positive");

  double sx = 0.0, sy = 0.0;
  std::vector<double> lx(n), ly(n);
  for (int i = 0; i < n; ++i) {
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw Error("power_law_fit: all x equal");
  PowerLawFit fit;
  fit.exponent = sxy / sxx;
  double ss_res = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = ly[i] - my - fit.exponent * (lx[i] - mx);
    ss_res += r * r;
  }
  fit.stderr_exponent = n > 2 ? std::sqrt(ss_res / (n - 2) / sxx) : 0.0;
  return fit;
}

}  // namespace qimpact
