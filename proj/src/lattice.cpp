#include "qimpact/lattice.hpp"

#include <cmath>
#include <limits>

namespace qimpact {

VectorXd Grid::positions() const {
  VectorXd xs(n);
  for (int i = 0; i < n; ++i) xs[i] = x(i);
  return xs;
}

Grid build_grid(double x_min, double x_max, int n) {
  if (n < 3) throw InvalidGrid("build_grid: need at least 3 points");
  if (!(x_max > x_min)) throw InvalidGrid("build_grid: x_max must exceed x_min");
  return Grid{x_min, x_max, n};
}

void PotentialSpec::validate() const {
  if (!(k > 0.0) || !(m > 0.0) || !(hbar > 0.0))
    throw ConfigInvalid("PotentialSpec: k, m, hbar must be positive");
  if (is_soft() && (!(A > 0.0) || !(c > 0.0)))
    throw ConfigInvalid("PotentialSpec: soft wall needs A > 0 and c > 0");
}

WaveState gaussian_packet(const Grid& grid, double mean, double variance,
                          double momentum, double hbar) {
  if (!(variance > 0.0)) throw PacketClipped("gaussian_packet: variance must be positive");
  if (!(mean > grid.x_min && mean < grid.x_max))
    throw PacketClipped("gaussian_packet: mean outside the open domain");

  const double dx = grid.dx();
  VectorXcd psi(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    const double amp = std::exp(-(x - mean) * (x - mean) / (4.0 * variance));
    psi[i] = amp * std::polar(1.0, momentum * x / hbar);
  }
  // Tail mass outside the domain, estimated from the edge density.
  const double rho_lo = std::norm(psi[0]);
  const double rho_hi = std::norm(psi[grid.n - 1]);
  const double total = psi.squaredNorm() * dx;
  if ((rho_lo + rho_hi) * dx / total > 1e-8)
    throw PacketClipped("gaussian_packet: tail mass at domain edges exceeds 1e-8");

  psi /= std::sqrt(total);
  return WaveState{grid, std::move(psi), 0.0};
}

namespace {

// Power series for Li2, valid and fast for |x| <= 1/2.
double dilog_series(double x) {
  double sum = 0.0, term = x;
  for (int k = 1; k < 64; ++k) {
    sum += term / (k * k);
    term *= x;
    if (std::abs(term) < 1e-18) break;
  }
  return sum;
}

}  // namespace

// Li2(x) for x <= 0 via the inversion and Landen identities, reducing every
// argument to the fast-series region |x| <= 1/2.
double dilog_nonpositive(double x) {
  if (x > 0.0) throw Error("dilog_nonpositive: positive argument");
  if (x == 0.0) return 0.0;
  if (x < -1.0) {
    const double l = std::log(-x);
    static const double pi2_6 = M_PI * M_PI / 6.0;
    return -pi2_6 - 0.5 * l * l - dilog_nonpositive(1.0 / x);
  }
  if (x < -0.5) {
    // Landen: Li2(x) = -Li2(x/(x-1)) - ln(1-x)^2/2; x/(x-1) lands in [1/3, 1/2].
    const double l = std::log1p(-x);
    return -dilog_series(x / (x - 1.0)) - 0.5 * l * l;
  }
  return dilog_series(x);
}

namespace {

// Smooth part of the soft potential beyond 1/2 k x^2:
// integral of the sigmoid stiffness, normalized so the extra term -> 0 as
// x -> -inf; the overall constant is fixed afterwards so V_extra(0) = 0.
double soft_extra_raw(const PotentialSpec& s, double x) {
  const double z = s.c * (x - s.x_w);
  // -Li2(-e^z) is evaluated stably on both sides of the wall.
  double li;
  if (z < 0.0) {
    li = -dilog_nonpositive(-std::exp(z));
  } else {
    static const double pi2_6 = M_PI * M_PI / 6.0;
    li = 0.5 * z * z + pi2_6 + dilog_nonpositive(-std::exp(-z));
  }
  return s.k * s.A / (s.c * s.c) * li;
}

}  // namespace

double potential_value(const PotentialSpec& spec, double x, double t) {
  switch (spec.variant) {
    case PotentialVariant::HardWall:
      if (x >= spec.x_w) return std::numeric_limits<double>::infinity();
      return 0.5 * spec.k * x * x;
    case PotentialVariant::ForcedHardWall:
      if (x >= spec.x_w) return std::numeric_limits<double>::infinity();
      return 0.5 * spec.k * x * x + x * spec.A_f * std::sin(spec.omega_f * t);
    case PotentialVariant::SoftSigmoidWall:
      return 0.5 * spec.k * x * x + soft_extra_raw(spec, x) - soft_extra_raw(spec, 0.0) +
             x * spec.A_f * std::cos(spec.omega_f * t);
  }
  return 0.0;
}

double potential_derivative(const PotentialSpec& spec, double x, double t) {
  switch (spec.variant) {
    case PotentialVariant::HardWall:
      return spec.k * x;
    case PotentialVariant::ForcedHardWall:
      return spec.k * x + spec.A_f * std::sin(spec.omega_f * t);
    case PotentialVariant::SoftSigmoidWall: {
      const double z = spec.c * (x - spec.x_w);
      // softplus(z) = ln(1 + e^z), stable form
      const double softplus = z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
      return spec.k * x + spec.k * spec.A / spec.c * softplus +
             spec.A_f * std::cos(spec.omega_f * t);
    }
  }
  return 0.0;
}

SoftDerivatives soft_derivatives(const PotentialSpec& spec, double x) {
  if (!spec.is_soft())
    throw WrongVariant("soft_derivatives: requires SoftSigmoidWall variant");
  const double z = spec.c * (x - spec.x_w);
  // sigma = 1/(1+e^-z), computed stably
  double sigma;
  if (z >= 0.0) {
    sigma = 1.0 / (1.0 + std::exp(-z));
  } else {
    const double e = std::exp(z);
    sigma = e / (1.0 + e);
  }
  const double v2 = spec.k * spec.A * sigma + spec.k;
  const double v3 = spec.k * spec.A * spec.c * sigma * (1.0 - sigma);
  return {v2, v3};
}

double grazing_amplitude(double x_w, double m, double omega0, double omega_f) {
  if (omega_f == omega0)
    throw ResonantForcing("grazing_amplitude: omega_f equals omega0");
  return x_w * m * omega0 * std::abs(omega_f - omega0);
}

}  // namespace qimpact
