#include "qimpact/propagator.hpp"

#include <cmath>

namespace qimpact {

CfetCoefficients CfetCoefficients::standard() {
  CfetCoefficients c;
  const double s = std::sqrt(3.0 / 20.0);
  c.x1 = 0.5 - s;
  c.x2 = 0.5;
  c.x3 = 0.5 + s;
  const double r = std::sqrt(5.0 / 3.0);
  c.g1 = 37.0 / 240.0 - 10.0 / 87.0 * r;
  c.g2 = -1.0 / 30.0;
  c.g3 = 37.0 / 240.0 + 10.0 / 87.0 * r;
  c.g4 = -11.0 / 360.0;
  c.g5 = 23.0 / 45.0;
  return c;
}

Propagator::Propagator(PotentialSpec spec, Grid grid)
    : spec_(std::move(spec)), grid_(grid) {
  spec_.validate();
  if (!spec_.is_soft() && grid_.x_max > spec_.x_w + 1e-12)
    throw InvalidGrid("Propagator: hard-wall grid must end at or before x_w");

  const int n_int = grid_.n - 2;
  const double L = grid_.x_max - grid_.x_min;
  kin_eigs_.resize(n_int);
  const double kin = spec_.hbar * spec_.hbar / (2.0 * spec_.m);
  for (int k = 0; k < n_int; ++k) {
    const double p = M_PI * (k + 1) / L;
    kin_eigs_[k] = kin * p * p;
  }
  static_pot_.resize(n_int);
  for (int i = 0; i < n_int; ++i) {
    const double x = grid_.x(i + 1);
    static_pot_[i] = spec_.is_soft()
                         ? [&] {
                             PotentialSpec s = spec_;
                             s.A_f = 0.0;
                             return potential_value(s, x, 0.0);
                           }()
                         : 0.5 * spec_.k * x * x;
  }
  dst_re_ = std::make_unique<Dst1>(n_int);
  dst_im_ = std::make_unique<Dst1>(n_int);
}

VectorXd Propagator::potential_interior(double t) const {
  VectorXd v = static_pot_;
  if (spec_.A_f != 0.0) {
    const double drive = spec_.is_soft() ? spec_.A_f * std::cos(spec_.omega_f * t)
                                         : spec_.A_f * std::sin(spec_.omega_f * t);
    for (int i = 0; i < v.size(); ++i) v[i] += grid_.x(i + 1) * drive;
  }
  return v;
}

// exp(scale * (kinetic_weight * T + diag(pot))) applied to the interior vector.
VectorXcd Propagator::expv_interior(const VectorXcd& interior, const VectorXd& pot,
                                    double kinetic_weight, Complex scale) const {
  const int n_int = static_cast<int>(interior.size());
  const double dst_norm = 1.0 / (2.0 * (n_int + 1));
  auto matvec = [&](const VectorXcd& in, VectorXcd& out) {
    double* bre = dst_re_->buffer();
    double* bim = dst_im_->buffer();
    for (int i = 0; i < n_int; ++i) {
      bre[i] = in[i].real();
      bim[i] = in[i].imag();
    }
    dst_re_->execute();
    dst_im_->execute();
    for (int k = 0; k < n_int; ++k) {
      const double w = kin_eigs_[k] * kinetic_weight * dst_norm;
      bre[k] *= w;
      bim[k] *= w;
    }
    dst_re_->execute();
    dst_im_->execute();
    out.resize(n_int);
    for (int i = 0; i < n_int; ++i)
      out[i] = Complex(bre[i], bim[i]) + pot[i] * in[i];
  };
  return krylov_expv(matvec, interior, scale, krylov);
}

VectorXcd Propagator::apply_hamiltonian(const VectorXcd& psi, double t) const {
  const int n_int = grid_.n - 2;
  const VectorXd pot = potential_interior(t);
  VectorXcd interior = psi.segment(1, n_int);
  const double dst_norm = 1.0 / (2.0 * (n_int + 1));
  double* bre = dst_re_->buffer();
  double* bim = dst_im_->buffer();
  for (int i = 0; i < n_int; ++i) {
    bre[i] = interior[i].real();
    bim[i] = interior[i].imag();
  }
  dst_re_->execute();
  dst_im_->execute();
  for (int k = 0; k < n_int; ++k) {
    const double w = kin_eigs_[k] * dst_norm;
    bre[k] *= w;
    bim[k] *= w;
  }
  dst_re_->execute();
  dst_im_->execute();
  VectorXcd out = VectorXcd::Zero(grid_.n);
  for (int i = 0; i < n_int; ++i)
    out[i + 1] = Complex(bre[i], bim[i]) + pot[i] * interior[i];
  return out;
}

WaveState Propagator::cfet4_step(const WaveState& psi, double dt) const {
  if (dt == 0.0) throw Error("cfet4_step: dt must be nonzero");
  const CfetCoefficients c = CfetCoefficients::standard();
  const int n_int = grid_.n - 2;
  const double norm0 = psi.norm_sq();

  const VectorXd v1 = potential_interior(psi.t + c.x1 * dt);
  const VectorXd v2 = potential_interior(psi.t + c.x2 * dt);
  const VectorXd v3 = potential_interior(psi.t + c.x3 * dt);
  const Complex scale(0.0, -dt / spec_.hbar);

  VectorXcd cur = psi.psi.segment(1, n_int);
  // Rightmost factor acts first.
  struct Weights {
    double a, b, cc;
  };
  const Weights order[3] = {{c.g3, c.g2, c.g1}, {c.g4, c.g5, c.g4}, {c.g1, c.g2, c.g3}};
  for (const Weights& w : order) {
    const VectorXd pot = w.a * v1 + w.b * v2 + w.cc * v3;
    cur = expv_interior(cur, pot, w.a + w.b + w.cc, scale);
  }

  WaveState out;
  out.grid = grid_;
  out.t = psi.t + dt;
  out.psi = VectorXcd::Zero(grid_.n);
  out.psi.segment(1, n_int) = cur;

  const double drift = std::abs(out.norm_sq() - norm0);
  if (drift >= 1e-9)
    throw NormDrift("cfet4_step: norm drift " + std::to_string(drift));
  out.psi /= std::sqrt(out.norm_sq());
  return out;
}

WaveState Propagator::exp_step_frozen(const WaveState& psi, double dt,
                                      double t_frozen) const {
  const int n_int = grid_.n - 2;
  const VectorXd pot = potential_interior(t_frozen);
  VectorXcd cur =
      expv_interior(psi.psi.segment(1, n_int), pot, 1.0, Complex(0.0, -dt / spec_.hbar));
  WaveState out;
  out.grid = grid_;
  out.t = psi.t + dt;
  out.psi = VectorXcd::Zero(grid_.n);
  out.psi.segment(1, n_int) = cur;
  return out;
}

std::vector<WaveState> Propagator::evolve(const WaveState& psi0, double t_end,
                                          double dt, int sample_stride) const {
  if (!(dt > 0.0)) throw Error("evolve: dt must be positive");
  if (!(t_end > 0.0)) throw Error("evolve: t_end must be positive");
  if (sample_stride < 1) throw Error("evolve: sample_stride must be >= 1");

  const long n_steps = std::lround(t_end / dt);
  std::vector<WaveState> samples;
  samples.reserve(static_cast<size_t>(n_steps / sample_stride) + 2);

  WaveState cur = psi0;
  const double norm0 = cur.norm_sq();
  samples.push_back(cur);
  for (long s = 1; s <= n_steps; ++s) {
    cur = cfet4_step(cur, dt);
    if (s % sample_stride == 0) samples.push_back(cur);
  }
  if (std::abs(cur.norm_sq() - norm0) >= 1e-7)
    throw NormDrift("evolve: cumulative norm drift exceeds 1e-7");
  return samples;
}

std::vector<WaveState> evolve_static(const EigenBasis& basis, const WaveState& psi0,
                                     const std::vector<double>& times, double hbar) {
  const Grid& g = basis.grid;
  if (!(psi0.grid == g)) throw Error("evolve_static: grid mismatch");
  const double dx = g.dx();

  // Expansion coefficients c_n = <phi_n|psi0>.
  VectorXcd coeff(basis.n_states);
  for (int n = 0; n < basis.n_states; ++n)
    coeff[n] = (basis.states.col(n).cast<Complex>().conjugate().array() *
                psi0.psi.array())
                   .sum() *
               dx;
  const double captured = coeff.squaredNorm();
  if (captured < 1.0 - 1e-6)
    throw BasisTruncation("evolve_static: basis captures only " +
                          std::to_string(captured) + " of the state");

  std::vector<WaveState> out;
  out.reserve(times.size());
  for (double t : times) {
    VectorXcd phase(basis.n_states);
    for (int n = 0; n < basis.n_states; ++n)
      phase[n] = coeff[n] * std::polar(1.0, -basis.energies[n] * t / hbar);
    WaveState w;
    w.grid = g;
    w.t = t;
    w.psi = basis.states.cast<Complex>() * phase;
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace qimpact
