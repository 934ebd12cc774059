#ifndef QIMPACT_CONFIG_HPP
#define QIMPACT_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qimpact/lattice.hpp"

namespace qimpact {

/// Full description of one run. Serializes to JSON with every field present,
/// so configs round-trip losslessly and hash stably.
struct ExperimentConfig {
  std::string experiment;  // eigen | evolve | unforced | forced | otoc | qle |
                           // classical | diagnose
  PotentialSpec potential;

  // Spatial grid (where the experiment uses one).
  double x_min = -25.0;
  double x_max = 0.0;
  int grid_n = 1024;

  // Initial Gaussian packet.
  double packet_mean = -5.0;
  double packet_variance = 0.5;
  double packet_momentum = 0.0;

  // Time stepping / sampling.
  double t_end = 100.0;
  double dt = 1e-2;
  int sample_stride = 1;

  // Parameter sweep over the wall position.
  double scan_lo = 0.0;
  double scan_hi = 0.0;
  double scan_step = 0.01;

  // Eigenbasis / OTOC sizes.
  std::vector<double> betas;
  int n_states = 64;
  int n_thermal = 0;

  // Thermal bath (Langevin experiments).
  double noise_kT = 0.01;
  double noise_Gamma = 1.0;
  double noise_tau_c = 3.0;

  // Stochastic ensembles.
  int n_realizations = 100;
  double T_lyap = 1000.0;
  double restitution = 0.95;

  std::uint64_t seed = 1;
  int threads = 0;  // 0 = all available; results never depend on this
  std::string output_dir = "out";
  std::string input_path;  // diagnose: CSV (t, value) to analyze
};

/// Strict parse: unknown keys anywhere raise ConfigInvalid, as do missing or
/// ill-typed required fields and out-of-range values.
ExperimentConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const ExperimentConfig& config);

/// Stable digest of the canonical serialization.
std::string config_hash(const ExperimentConfig& config);

/// Range/consistency checks shared by parsing and run().
void validate_config(const ExperimentConfig& config);

/// Fully populated configs for the stock experiments: unforced-grazing,
/// forced-grazing, otoc-scan, qle-scan, classical-scan.
ExperimentConfig preset(const std::string& name);

/// Apply a "dotted.key=value" override to the JSON form of a config.
ExperimentConfig apply_override(const ExperimentConfig& config,
                                const std::string& assignment);

}  // namespace qimpact

#endif
