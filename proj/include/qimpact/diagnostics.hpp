#ifndef QIMPACT_DIAGNOSTICS_HPP
#define QIMPACT_DIAGNOSTICS_HPP

#include <cstdint>
#include <vector>

#include "qimpact/observables.hpp"

namespace qimpact {

/// One-sided magnitude spectrum of a real series.
struct Spectrum {
  std::vector<double> freqs;  // ascending, up to Nyquist
  std::vector<double> amps;   // nonnegative magnitudes
};

enum class Taper { None, Hann };

/// Magnitude of the DFT of the mean-removed, tapered series. Length >= 64.
Spectrum power_spectrum(const TimeSeries& series, Taper window = Taper::Hann);

/// N(sigma) = number of spectral peaks above threshold sigma, with a
/// least-squares power-law fit of ln N against ln sigma.
struct SpectralDistribution {
  std::vector<double> sigmas;
  std::vector<int> counts;
  double exponent = 0.0;
  double stderr_exponent = 0.0;
};

/// Peaks are strict local maxima of the amplitudes. If sigma_grid is empty,
/// thresholds are log-spaced between the 20th and 90th percentile of peak
/// amplitudes. Needs at least 20 peaks.
SpectralDistribution spectral_distribution(const Spectrum& spec,
                                           std::vector<double> sigma_grid = {});

enum class ZeroOneMode { Standard, Modified };

struct ZeroOneResult {
  std::vector<double> c_values;
  std::vector<double> K_values;
  double K_median = 0.0;
  ZeroOneMode mode = ZeroOneMode::Standard;
};

/// 0-1 test for chaos, correlation-method variant: K_c is the correlation of
/// the oscillation-corrected mean-square displacement D_c(n) with n over
/// n <= length/10. Standard mode draws n_c values of c uniformly in
/// (pi/5, 4pi/5); modified mode uses fixed irrational multiples of pi in the
/// same band and perturbs D_c with white noise of amplitude
/// 0.5e-2 * stddev(series). Needs at least 2000 samples.
ZeroOneResult zero_one_test(const TimeSeries& series, ZeroOneMode mode,
                            int n_c = 100, std::uint64_t seed = 1);

struct FtleDistribution {
  int window_length = 0;
  std::vector<double> exponents;  // one per reference point, units 1/time
  double positive_fraction = 0.0;
};

/// Finite-time Lyapunov exponents of a delay-embedded scalar series:
/// nearest-neighbor separation growth over `window` samples, with temporal
/// neighbors within one mean period excluded. delay <= 0 picks the first
/// autocorrelation minimum.
FtleDistribution finite_time_lyapunov(const TimeSeries& series, int embed_dim,
                                      int delay, int window);

/// Ordinary least squares on (ln x, ln y); returns slope and its standard
/// error. All data must be positive.
struct PowerLawFit {
  double exponent = 0.0;
  double stderr_exponent = 0.0;
};
PowerLawFit power_law_fit(const std::vector<double>& xs, const std::vector<double>& ys);

/// First minimum of the sample autocorrelation (lag >= 1).
int autocorrelation_first_minimum(const std::vector<double>& values);

}  // namespace qimpact

#endif
