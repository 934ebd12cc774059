#ifndef QIMPACT_LATTICE_HPP
#define QIMPACT_LATTICE_HPP

#include <Eigen/Dense>
#include <complex>

#include "qimpact/errors.hpp"

namespace qimpact {

using Complex = std::complex<double>;
using Eigen::VectorXcd;
using Eigen::VectorXd;

/// Uniform 1D spatial lattice. Endpoints are included; for hard-wall
/// potentials the right endpoint sits on the wall and carries psi = 0.
struct Grid {
  double x_min = 0.0;
  double x_max = 0.0;
  int n = 0;

  double dx() const { return (x_max - x_min) / (n - 1); }
  double x(int i) const { return x_min + i * dx(); }
  VectorXd positions() const;

  bool operator==(const Grid&) const = default;
};

Grid build_grid(double x_min, double x_max, int n);

/// Complex wavefunction sampled on a grid at time t.
struct WaveState {
  Grid grid;
  VectorXcd psi;
  double t = 0.0;

  double norm_sq() const { return psi.squaredNorm() * grid.dx(); }
};

enum class PotentialVariant { HardWall, ForcedHardWall, SoftSigmoidWall };

struct PotentialSpec {
  PotentialVariant variant = PotentialVariant::HardWall;
  double k = 1.0;
  double m = 1.0;
  double hbar = 1.0;
  double x_w = 0.0;
  double A_f = 0.0;      // forcing amplitude (0 for unforced)
  double omega_f = 0.0;  // forcing angular frequency
  double A = 0.0;        // soft-wall stiffness factor
  double c = 0.0;        // soft-wall smoothness

  double omega0() const { return std::sqrt(k / m); }
  bool is_soft() const { return variant == PotentialVariant::SoftSigmoidWall; }
  void validate() const;
};

/// Minimum-uncertainty Gaussian packet with the given density mean/variance
/// and a momentum boost, renormalized on the grid.
WaveState gaussian_packet(const Grid& grid, double mean, double variance,
                          double momentum, double hbar = 1.0);

/// V(x,t). Hard-wall variants return +inf (the wall sentinel) for x >= x_w.
double potential_value(const PotentialSpec& spec, double x, double t);

/// dV/dx, including the time-dependent forcing term. For hard-wall variants
/// only valid on x < x_w.
double potential_derivative(const PotentialSpec& spec, double x, double t);

struct SoftDerivatives {
  double v2;  // V''
  double v3;  // V'''
};

SoftDerivatives soft_derivatives(const PotentialSpec& spec, double x);

double grazing_amplitude(double x_w, double m, double omega0, double omega_f);

/// Real dilogarithm Li2(x) for x <= 0 (all that the soft potential needs).
double dilog_nonpositive(double x);

}  // namespace qimpact

#endif
