#ifndef QIMPACT_SPECTRAL_HPP
#define QIMPACT_SPECTRAL_HPP

#include <Eigen/Dense>
#include <string>

#include "qimpact/lattice.hpp"

namespace qimpact {

/// Lowest eigenpairs of a static Hamiltonian on a Dirichlet grid.
/// States are columns, sampled on the grid (zero at both endpoints) and
/// normalized so that sum |phi_i|^2 dx = 1.
struct EigenBasis {
  Grid grid;
  VectorXd energies;
  Eigen::MatrixXd states;
  int n_states = 0;
};

/// Diagonalizes H = -(hbar^2/2m) d2/dx2 + V(x) with Dirichlet ends using a
/// sine-basis projection of the grid operator (the kinetic term is exact on
/// sine modes, the potential acts pointwise). n_modes = 0 picks a default
/// large enough for the requested states; n_modes is capped at n-2.
EigenBasis eigensolve(const PotentialSpec& spec, const Grid& grid, int n_states,
                      int n_modes = 0);

/// Independent Numerov-Cooley shooting refinement of a single eigenvalue.
/// Used as a verification oracle; integrates on an internally refined grid.
double numerov_verify(const PotentialSpec& spec, const Grid& grid, double E_approx);

/// x_{nm} = sum_i phi_n(x_i) x_i phi_m(x_i) dx, exactly symmetric.
Eigen::MatrixXd position_matrix(const EigenBasis& basis);

/// Binary round-trip for basis reuse across runs.
void save_basis(const EigenBasis& basis, const std::string& path);
EigenBasis load_basis(const std::string& path);

/// Cache key: stable hex digest of (spec, grid, n_states).
std::string basis_cache_key(const PotentialSpec& spec, const Grid& grid, int n_states);

}  // namespace qimpact

#endif
