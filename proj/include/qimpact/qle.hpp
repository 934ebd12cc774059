#ifndef QIMPACT_QLE_HPP
#define QIMPACT_QLE_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "qimpact/lattice.hpp"

namespace qimpact {

/// Colored-noise bath: a sum of Ornstein-Uhlenbeck components whose total
/// force obeys <f(t)f(t')> = (Gamma kT / tau_c) e^{-|t-t'|/tau_c}.
struct NoiseModel {
  double kT = 0.01;
  double Gamma = 1.0;
  double tau_c = 3.0;
  int n_components = 1;
};

/// Semiclassical Langevin state: means (X, P), memory force z, second-order
/// fluctuation moments, and the OU noise components.
struct QleState {
  double X = 0.0, P = 0.0, z = 0.0;
  double sigma_xx = 0.0, sigma_xp = 0.0, sigma_pp = 0.0;
  std::vector<double> etas;
  double t = 0.0;
};

/// X = P = z = 0 with minimum-uncertainty moments for the harmonic core.
QleState qle_initial_state(const PotentialSpec& spec, const NoiseModel& noise);

/// Exact OU transition for each component over dt. Requires dt < tau_c/10.
void ou_update(std::vector<double>& etas, const NoiseModel& noise, double dt,
               std::mt19937_64& rng);

double noise_force(const QleState& state);

/// Second-order quantum correction Q = -1/2 V'''(X) sigma_xx (soft wall only).
double quantum_correction(double X, double sigma_xx, const PotentialSpec& spec);

/// One stochastic Heun step of (X, P, z) plus the exact symplectic moment
/// rotation with V'' frozen at the predictor midpoint. The noise components
/// advance by their exact OU transition.
QleState qle_step(const QleState& state, const PotentialSpec& spec,
                  const NoiseModel& noise, double dt, std::mt19937_64& rng,
                  double blowup_limit = 1e6);

/// Repeated stepping, emitting every sample_stride-th state.
std::vector<QleState> qle_evolve(QleState state, const PotentialSpec& spec,
                                 const NoiseModel& noise, double T, double dt,
                                 std::mt19937_64& rng, int sample_stride = 1);

/// X at sign changes of P (downward by default), linearly interpolated, with
/// the first 20% of the trajectory discarded. Needs >= 50 crossings.
std::vector<double> poincare_section(const std::vector<QleState>& trajectory,
                                     bool upward = false);

struct LyapunovResult {
  double mean = 0.0;
  double stddev = 0.0;
  std::vector<double> lambdas;
};

/// Benettin largest Lyapunov exponent from main/shadow trajectory pairs that
/// share the identical noise path, averaged over noise realizations. Each
/// realization owns the RNG stream derived from (seed, index).
LyapunovResult lyapunov_shadow(const PotentialSpec& spec, const NoiseModel& noise,
                               double x_w, int n_realizations, double T, double dt,
                               std::uint64_t seed, double delta0 = 1e-8,
                               double renorm_interval = 1.0);

struct QleScanOptions {
  double dt = 1e-3;
  int n_strobe_periods = 2200;   // forcing periods in the long trajectory
  int n_strobe_skip = 200;       // discarded as transient before the 0-1 test
  int n_realizations = 100;
  double T_lyap = 2000.0;
  std::uint64_t seed = 1;
};

struct QleScanPoint {
  double x_w = 0.0;
  std::vector<double> section;
  double mean_lambda = 0.0;
  double std_lambda = 0.0;
  double K_median = 0.0;
};

/// Per wall position: one long trajectory for the Poincare section and the
/// 0-1 test on the stroboscopic X series, plus the Lyapunov ensemble.
std::vector<QleScanPoint> bifurcation_scan(double x_w_lo, double x_w_hi, double step,
                                           const PotentialSpec& base,
                                           const NoiseModel& noise,
                                           const QleScanOptions& opts = {});

}  // namespace qimpact

#endif
