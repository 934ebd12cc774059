#ifndef QIMPACT_CLASSICAL_HPP
#define QIMPACT_CLASSICAL_HPP

#include <vector>

#include "qimpact/errors.hpp"

namespace qimpact {

struct ClassicalParams {
  double k = 1.0;
  double m = 1.0;
  double x_w = 0.0;
  double A_f = 0.0;
  double omega_f = 0.0;
  double r = 0.95;  // restitution coefficient
};

struct ClassicalState {
  double x = 0.0;
  double v = 0.0;
  double t = 0.0;
};

struct ClassicalTrajectory {
  std::vector<ClassicalState> samples;  // uniform dt_sample grid
  std::vector<double> impact_times;
};

/// Event-driven integration: the driven linear oscillator in closed form
/// between impacts, impacts located to 1e-10 by bisection plus Newton,
/// velocity reversal v+ = -r v- at the wall.
ClassicalTrajectory simulate_impact(const ClassicalParams& params,
                                    const ClassicalState& ic, double T,
                                    double dt_sample);

/// Largest Lyapunov exponent from tangent dynamics: rotation between impacts,
/// saltation matrix [[-r, 0], [(1+r) a / v-, -r]] at each impact, Benettin
/// renormalization, first 20% of T discarded as transient.
double lyapunov_classical(const ClassicalParams& params, const ClassicalState& ic,
                          double T);

struct ClassicalScanPoint {
  double x_w = 0.0;
  std::vector<double> strobe;  // x at multiples of the forcing period
  double lambda = 0.0;
};

/// Wall-position sweep with stroboscopic sampling after transient; initial
/// conditions continue from the previous wall position, with a steady-state
/// cold start at the first point (and whenever continuation is disabled).
std::vector<ClassicalScanPoint> bifurcation_classical(double x_w_lo, double x_w_hi,
                                                      double step,
                                                      ClassicalParams params,
                                                      bool continuation = true,
                                                      int n_periods = 300,
                                                      int n_skip = 100);

}  // namespace qimpact

#endif
