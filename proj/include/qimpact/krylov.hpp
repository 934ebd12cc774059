#ifndef QIMPACT_KRYLOV_HPP
#define QIMPACT_KRYLOV_HPP

#include <Eigen/Dense>
#include <complex>
#include <functional>

#include "qimpact/errors.hpp"

namespace qimpact {

using MatVec = std::function<void(const Eigen::VectorXcd&, Eigen::VectorXcd&)>;

struct KrylovOptions {
  double tol = 1e-12;    // norm-relative residual between successive iterates
  int max_dim = 128;     // subspace cap
  int check_every = 4;   // convergence-check cadence
  int restart_dim = 128;  // set below max_dim to split the interval instead
                          // of growing the subspace past this size; off by
                          // default (one long Lanczos run measures faster
                          // than split segments on these Hamiltonians)
  int max_splits = 40;   // recursion guard for the interval halving
};

/// exp(scale * H) v for Hermitian H given through its matvec, via Lanczos
/// with full reorthogonalization. If the subspace reaches restart_dim without
/// converging, the interval is split: exp(sH)v = exp(s/2 H) exp(s/2 H) v,
/// which is exact for fixed H. Unitary to roundoff when scale is purely
/// imaginary. Throws KrylovStall if the subspace cap is hit before the
/// successive-iterate difference drops below tol * ||v||.
Eigen::VectorXcd krylov_expv(const MatVec& matvec, const Eigen::VectorXcd& v,
                             std::complex<double> scale,
                             const KrylovOptions& opts = {});

}  // namespace qimpact

#endif
