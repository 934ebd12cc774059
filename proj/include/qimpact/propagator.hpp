#ifndef QIMPACT_PROPAGATOR_HPP
#define QIMPACT_PROPAGATOR_HPP

#include <memory>
#include <vector>

#include "qimpact/fft.hpp"
#include "qimpact/krylov.hpp"
#include "qimpact/lattice.hpp"
#include "qimpact/spectral.hpp"

namespace qimpact {

/// Nodes and weights of the 4th-order optimized commutator-free exponential
/// propagator (three exponentials of weighted Hamiltonian samples).
struct CfetCoefficients {
  double x1, x2, x3;
  double g1, g2, g3, g4, g5;

  static CfetCoefficients standard();
  double weight_sum() const { return 2.0 * (g1 + g2 + g3 + g4) + g5; }
};

/// Time propagation on a Dirichlet grid. The kinetic term acts through the
/// sine-mode decomposition of the interior points, the potential pointwise;
/// the wall is the grid end itself.
class Propagator {
 public:
  Propagator(PotentialSpec spec, Grid grid);

  const PotentialSpec& spec() const { return spec_; }
  const Grid& grid() const { return grid_; }

  /// One CFET-4 step. dt may be negative (used by reversibility checks).
  WaveState cfet4_step(const WaveState& psi, double dt) const;

  /// Repeated stepping, emitting every sample_stride-th state (the initial
  /// state included). Total norm drift above 1e-7 is an error.
  std::vector<WaveState> evolve(const WaveState& psi0, double t_end, double dt,
                                int sample_stride) const;

  /// H(t) applied to a full-grid wavefunction (endpoints treated as zero).
  VectorXcd apply_hamiltonian(const VectorXcd& psi, double t) const;

  /// exp(-i dt H(t_frozen)/hbar) psi by a single Krylov exponential.
  WaveState exp_step_frozen(const WaveState& psi, double dt, double t_frozen) const;

  KrylovOptions krylov;

 private:
  VectorXd potential_interior(double t) const;
  VectorXcd expv_interior(const VectorXcd& interior, const VectorXd& pot,
                          double kinetic_weight, Complex scale) const;

  PotentialSpec spec_;
  Grid grid_;
  VectorXd kin_eigs_;  // kinetic eigenvalues of the interior sine modes
  VectorXd static_pot_;
  std::unique_ptr<Dst1> dst_re_, dst_im_;
};

/// Exact-in-time propagation in a truncated eigenbasis:
/// psi(t) = sum_n c_n e^{-i E_n t / hbar} |n>.
std::vector<WaveState> evolve_static(const EigenBasis& basis, const WaveState& psi0,
                                     const std::vector<double>& times,
                                     double hbar = 1.0);

}  // namespace qimpact

#endif
