#include "qimpact/krylov.hpp"

#include <cmath>
#include <vector>

namespace qimpact {

namespace {

// exp(scale * T) e1 for the real symmetric tridiagonal (alpha, beta) block of
// size m, through its dense eigendecomposition.
Eigen::VectorXcd small_exp_e1(const std::vector<double>& alpha,
                              const std::vector<double>& beta, int m,
                              std::complex<double> scale) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    t(i, i) = alpha[i];
    if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const Eigen::MatrixXd& q = es.eigenvectors();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(m);
  for (int j = 0; j < m; ++j) {
    const std::complex<double> w = std::exp(scale * ev[j]) * q(0, j);
    for (int i = 0; i < m; ++i) out[i] += q(i, j) * w;
  }
  return out;
}

}  // namespace

Eigen::VectorXcd krylov_expv(const MatVec& matvec, const Eigen::VectorXcd& v,
                             std::complex<double> scale, const KrylovOptions& opts) {
  const double vnorm = v.norm();
  if (vnorm == 0.0) return v;

  const int n = static_cast<int>(v.size());
  const bool can_split = opts.max_splits > 0 && opts.restart_dim < opts.max_dim;
  const int mmax =
      can_split ? std::min(opts.restart_dim, n) : std::min(opts.max_dim, n);

  std::vector<Eigen::VectorXcd> basis;
  basis.reserve(mmax + 1);
  basis.push_back(v / vnorm);

  std::vector<double> alpha, beta;
  Eigen::VectorXcd w(n);
  Eigen::VectorXcd prev_small;

  for (int j = 0; j < mmax; ++j) {
    matvec(basis[j], w);
    if (j > 0) w -= beta[j - 1] * basis[j - 1];
    const double a = std::real(basis[j].dot(w));
    alpha.push_back(a);
    w -= a * basis[j];
    // Full reorthogonalization keeps the propagation unitary to roundoff.
    for (const auto& q : basis) w -= q.dot(w) * q;
    const double b = w.norm();
    const int m = j + 1;

    const bool breakdown = b < 1e-14 * vnorm;
    if (breakdown || m == mmax || m % opts.check_every == 0) {
      Eigen::VectorXcd small = small_exp_e1(alpha, beta, m, scale);
      if (breakdown) {
        Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
        for (int i = 0; i < m; ++i) out += small[i] * basis[i];
        return vnorm * out;
      }
      if (prev_small.size() > 0) {
        double diff2 = 0.0;
        for (int i = 0; i < prev_small.size(); ++i)
          diff2 += std::norm(small[i] - prev_small[i]);
        for (int i = static_cast<int>(prev_small.size()); i < m; ++i)
          diff2 += std::norm(small[i]);
        if (std::sqrt(diff2) < opts.tol) {
          Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
          for (int i = 0; i < m; ++i) out += small[i] * basis[i];
          return vnorm * out;
        }
      }
      prev_small = std::move(small);
    }

    beta.push_back(b);
    basis.push_back(w / b);
  }
  if (can_split) {
    KrylovOptions half = opts;
    half.max_splits = opts.max_splits - 1;
    return krylov_expv(matvec, krylov_expv(matvec, v, 0.5 * scale, half),
                       0.5 * scale, half);
  }
  throw KrylovStall("krylov_expv: no convergence within the subspace cap");
}

}  // namespace qimpact
