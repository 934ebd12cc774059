#ifndef QIMPACT_OTOC_HPP
#define QIMPACT_OTOC_HPP

#include <vector>

#include "qimpact/spectral.hpp"

namespace qimpact {

/// Thermally averaged out-of-time-order correlator C_T(t).
struct OtocCurve {
  std::vector<double> times;
  std::vector<double> values;  // nonnegative
  double beta = 0.0;
  int n_states = 0;
};

/// c_n(t) = sum_m |b_nm(t)|^2 with b_nm(t) = -i <n|[x(t), p]|m>, both operators
/// truncated to the basis; rows n = 0..n_max-1, one row per time.
Eigen::MatrixXd otoc_microcanonical_all(const EigenBasis& basis,
                                        const std::vector<double>& times, int n_max,
                                        double m_mass = 1.0, double hbar = 1.0);

/// Single-state c_n(t). States within 3 of the truncation edge are rejected:
/// their intermediate sums are dominated by truncation error.
std::vector<double> microcanonical_otoc(const EigenBasis& basis, int n,
                                        const std::vector<double>& times,
                                        double m_mass = 1.0, double hbar = 1.0);

/// Boltzmann average of c_n over n < n_thermal. The discarded tail weight
/// e^{-beta E_{n_thermal}}/Z must be below 1e-8.
OtocCurve thermal_otoc(const EigenBasis& basis, double beta,
                       const std::vector<double>& times, int n_thermal,
                       double m_mass = 1.0, double hbar = 1.0);

/// Early-time growth fit of an OTOC curve: power law (ln C vs ln t) on the
/// window from t_start to the first local maximum, with the competing
/// exponential (ln C vs t) residual for comparison.
struct OtocFit {
  double exponent = 0.0;
  double stderr_exponent = 0.0;
  double loglog_residual = 0.0;   // rms residual of ln C vs ln t
  double semilog_residual = 0.0;  // rms residual of ln C vs t
  bool periodic = false;          // no usable growth window
  int i_start = 0, i_end = 0;     // fit window [i_start, i_end]
};
OtocFit otoc_growth_fit(const std::vector<double>& times,
                        const std::vector<double>& values, double t_start);

/// Harmonic-plus-wall basis on an automatically sized grid: the domain covers
/// the classical turning point of the highest retained state with padding.
EigenBasis otoc_basis(const PotentialSpec& spec, int n_states, int grid_n = 4096);

struct OtocScanRow {
  double x_w = 0.0;
  double beta = 0.0;
  OtocFit fit;
};

/// Growth exponent over a set of wall positions and inverse temperatures;
/// c_n(t) is computed once per wall position and shared across betas.
std::vector<OtocScanRow> otoc_growth_scan(const std::vector<PotentialSpec>& specs,
                                          const std::vector<double>& betas,
                                          const std::vector<double>& times,
                                          int n_states, int n_thermal,
                                          double fit_t_start);

}  // namespace qimpact

#endif
