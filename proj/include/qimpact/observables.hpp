#ifndef QIMPACT_OBSERVABLES_HPP
#define QIMPACT_OBSERVABLES_HPP

#include <vector>

#include "qimpact/lattice.hpp"

namespace qimpact {

/// Uniformly sampled real-valued series.
struct TimeSeries {
  std::vector<double> values;
  double dt_sample = 1.0;
  double t0 = 0.0;

  int size() const { return static_cast<int>(values.size()); }
  double mean() const;
  double stddev() const;
};

/// Wigner quasiprobability on the position grid times a momentum lattice.
struct WignerField {
  Grid x_grid;
  VectorXd p;            // ascending momentum lattice
  Eigen::MatrixXd w;     // (x index, p index)
  double dp = 0.0;
};

/// Differential entropy of the probability density, -sum rho ln(rho) dx.
double entropy(const WaveState& psi);

/// Wigner transform W(x,p) = (1/pi hbar) int dy psi*(x+y) psi(x-y) e^{2ipy/hbar},
/// evaluated by an FFT in y with zero-padding. n_p >= grid.n momentum points.
WignerField wigner(const WaveState& psi, int n_p, double hbar = 1.0);

struct Moments {
  double x, p, x2, p2;
};

/// Quadrature expectation values; momentum moments via centered differences.
Moments expectations(const WaveState& psi, double hbar = 1.0);

/// Average of |psi|^2 over the snapshots after discarding the first n_skip,
/// renormalized to unit integral. Needs at least 16 retained snapshots.
VectorXd stroboscopic_density(const std::vector<WaveState>& states, int n_skip);

/// Entropy evaluated on each snapshot of a uniformly sampled run.
TimeSeries entropy_series(const std::vector<WaveState>& states, double dt_sample);

}  // namespace qimpact

#endif
