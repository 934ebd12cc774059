#include "qimpact/observables.hpp"

#include <cmath>
#include <numeric>

#include "qimpact/errors.hpp"
#include "qimpact/fft.hpp"

namespace qimpact {

double TimeSeries::mean() const {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / values.size();
}

double TimeSeries::stddev() const {
  if (values.size() < 2) return 0.0;
  const double mu = mean();
  double acc = 0.0;
  for (double v : values) acc += (v - mu) * (v - mu);
  return std::sqrt(acc / values.size());
}

double entropy(const WaveState& psi) {
  const double dx = psi.grid.dx();
  double s = 0.0;
  for (int i = 0; i < psi.grid.n; ++i) {
    const double rho = std::norm(psi.psi[i]);
    if (rho >= 1e-300) s -= rho * std::log(rho);
  }
  return s * dx;
}

WignerField wigner(const WaveState& psi, int n_p, double hbar) {
  const int n = psi.grid.n;
  const double dx = psi.grid.dx();
  const int m = 2 * std::max(n, n_p);  // zero-padded transform length

  WignerField field;
  field.x_grid = psi.grid;
  field.dp = M_PI * hbar / (m * dx);
  field.p.resize(m);
  // Forward DFT index k corresponds to momentum -pi*hbar*wrap(k)/(m*dx);
  // store the ascending order and the permutation taking DFT bins there.
  std::vector<int> col_of(m);
  for (int k = 0; k < m; ++k) {
    const int wrapped = k < m / 2 ? k : k - m;
    const int col = m / 2 - wrapped - 1;  // ascending in p = -wrapped * dp
    col_of[k] = col;
    field.p[col] = -wrapped * field.dp;
  }

  field.w.resize(n, m);
  const double scale = dx / (M_PI * hbar);
  std::vector<std::complex<double>> corr(m);
  for (int i = 0; i < n; ++i) {
    std::fill(corr.begin(), corr.end(), std::complex<double>(0.0, 0.0));
    const int reach = std::min(i, n - 1 - i);
    for (int j = -reach; j <= reach; ++j) {
      const int a = j >= 0 ? j : j + m;
      corr[a] = std::conj(psi.psi[i + j]) * psi.psi[i - j];
    }
    auto spec = fft_forward(corr);
    for (int k = 0; k < m; ++k) {
      if (std::abs(spec[k].imag()) * scale >= 1e-10)
        throw Error("wigner: imaginary residue above 1e-10");
      field.w(i, col_of[k]) = scale * spec[k].real();
    }
  }
  return field;
}

Moments expectations(const WaveState& psi, double hbar) {
  const int n = psi.grid.n;
  const double dx = psi.grid.dx();
  Moments mo{0.0, 0.0, 0.0, 0.0};
  for (int i = 0; i < n; ++i) {
    const double rho = std::norm(psi.psi[i]);
    const double x = psi.grid.x(i);
    mo.x += rho * x;
    mo.x2 += rho * x * x;
  }
  for (int i = 1; i + 1 < n; ++i) {
    const Complex d1 = (psi.psi[i + 1] - psi.psi[i - 1]) / (2.0 * dx);
    const Complex d2 =
        (psi.psi[i + 1] - 2.0 * psi.psi[i] + psi.psi[i - 1]) / (dx * dx);
    mo.p += std::imag(std::conj(psi.psi[i]) * d1);
    mo.p2 -= std::real(std::conj(psi.psi[i]) * d2);
  }
  mo.x *= dx;
  mo.x2 *= dx;
  mo.p *= hbar * dx;
  mo.p2 *= hbar * hbar * dx;
  return mo;
}

VectorXd stroboscopic_density(const std::vector<WaveState>& states, int n_skip) {
  if (n_skip < 0) throw Error("stroboscopic_density: n_skip must be >= 0");
  const int retained = static_cast<int>(states.size()) - n_skip;
  if (retained < 16)
    throw TooFewSamples("stroboscopic_density: only " + std::to_string(std::max(retained, 0)) +
                        " snapshots retained, need 16");
  const Grid& g = states[n_skip].grid;
  VectorXd rho = VectorXd::Zero(g.n);
  for (size_t s = n_skip; s < states.size(); ++s) {
    if (!(states[s].grid == g)) throw Error("stroboscopic_density: grid mismatch");
    for (int i = 0; i < g.n; ++i) rho[i] += std::norm(states[s].psi[i]);
  }
  const double total = rho.sum() * g.dx();
  return rho / total;
}

TimeSeries entropy_series(const std::vector<WaveState>& states, double dt_sample) {
  TimeSeries ts;
  ts.dt_sample = dt_sample;
  ts.t0 = states.empty() ? 0.0 : states.front().t;
  ts.values.reserve(states.size());
  for (const auto& w : states) ts.values.push_back(entropy(w));
  return ts;
}

}  // namespace qimpact
