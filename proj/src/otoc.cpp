#include "qimpact/otoc.hpp"

#include <cmath>

#include "qimpact/errors.hpp"

namespace qimpact {

namespace {

// OLS of y against x; returns (slope, stderr of slope, rms residual).
struct LineFit {
  double slope, stderr_slope, rms;
};

LineFit line_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f{sxy / sxx, 0.0, 0.0};
  double ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = y[i] - my - f.slope * (x[i] - mx);
    ss += r * r;
  }
  f.rms = std::sqrt(ss / n);
  f.stderr_slope = n > 2 ? std::sqrt(ss / (n - 2) / sxx) : 0.0;
  return f;
}

}  // namespace

Eigen::MatrixXd otoc_microcanonical_all(const EigenBasis& basis,
                                        const std::vector<double>& times, int n_max,
                                        double m_mass, double hbar) {
  const int n_states = basis.n_states;
  if (n_max < 1 || n_max > n_states)
    throw IndexOutOfBasis("otoc: n_max outside the basis");

  const Eigen::MatrixXd x = position_matrix(basis);
  // Y_nk = (E_n - E_k) x_nk; the momentum matrix is p = i m Y / hbar.
  Eigen::MatrixXd y(n_states, n_states);
  for (int a = 0; a < n_states; ++a)
    for (int b = 0; b < n_states; ++b)
      y(a, b) = (basis.energies[a] - basis.energies[b]) * x(a, b);

  Eigen::MatrixXd out(times.size(), n_max);
  const double pref = m_mass / hbar;
  Eigen::MatrixXcd xt(n_states, n_states);
  for (size_t it = 0; it < times.size(); ++it) {
    const double t = times[it];
    for (int a = 0; a < n_states; ++a)
      for (int b = 0; b < n_states; ++b)
        xt(a, b) = x(a, b) * std::polar(1.0, (basis.energies[a] - basis.energies[b]) *
                                                 t / hbar);
    // b(t) = pref * (x(t) y - y x(t)); only the first n_max rows are needed.
    Eigen::MatrixXcd b_top =
        pref * (xt.topRows(n_max) * y - y.topRows(n_max).cast<Complex>() * xt);
    for (int n = 0; n < n_max; ++n) out(it, n) = b_top.row(n).squaredNorm();
  }
  return out;
}

std::vector<double> microcanonical_otoc(const EigenBasis& basis, int n,
                                        const std::vector<double>& times,
                                        double m_mass, double hbar) {
  if (n < 0 || n >= basis.n_states - 3)
    throw IndexOutOfBasis("microcanonical_otoc: state " + std::to_string(n) +
                          " is outside or within 3 of the truncation edge");
  Eigen::MatrixXd all = otoc_microcanonical_all(basis, times, n + 1, m_mass, hbar);
  std::vector<double> out(times.size());
  for (size_t it = 0; it < times.size(); ++it) out[it] = all(it, n);
  return out;
}

OtocCurve thermal_otoc(const EigenBasis& basis, double beta,
                       const std::vector<double>& times, int n_thermal,
                       double m_mass, double hbar) {
  if (n_thermal < 1 || n_thermal >= basis.n_states)
    throw IndexOutOfBasis("thermal_otoc: n_thermal outside the basis");
  if (!(beta > 0.0)) throw Error("thermal_otoc: beta must be positive");

  const double e0 = basis.energies[0];
  double z = 0.0;
  Eigen::VectorXd w(n_thermal);
  for (int n = 0; n < n_thermal; ++n) {
    w[n] = std::exp(-beta * (basis.energies[n] - e0));
    z += w[n];
  }
  const double tail = std::exp(-beta * (basis.energies[n_thermal] - e0)) / z;
  if (tail >= 1e-8)
    throw ThermalTailUncaptured("thermal_otoc: discarded weight " +
                                std::to_string(tail) + " at n_thermal=" +
                                std::to_string(n_thermal));

  Eigen::MatrixXd cn = otoc_microcanonical_all(basis, times, n_thermal, m_mass, hbar);
  OtocCurve out;
  out.times = times;
  out.beta = beta;
  out.n_states = basis.n_states;
  out.values.resize(times.size());
  for (size_t it = 0; it < times.size(); ++it)
    out.values[it] = cn.row(it).dot(w) / z;
  return out;
}

OtocFit otoc_growth_fit(const std::vector<double>& times,
                        const std::vector<double>& values, double t_start) {
  const int n = static_cast<int>(times.size());
  OtocFit fit;

  int i0 = 0;
  while (i0 < n && times[i0] < t_start) ++i0;
  if (i0 >= n) {
    fit.periodic = true;
    return fit;
  }

  // The growth window runs from t_start to the curve's global maximum
  // (saturation). The correlator oscillates at the oscillator period while
  // its envelope grows, so the fit uses the sequence of local maxima (the
  // envelope) up to saturation; a monotone curve has too few local maxima,
  // and then every sample in the window is used instead.
  int i1 = i0;
  for (int i = i0; i < n; ++i)
    if (values[i] > values[i1]) i1 = i;

  std::vector<int> pts;
  for (int i = std::max(i0, 1); i <= std::min(i1, n - 2); ++i)
    if (values[i] > values[i - 1] && values[i] >= values[i + 1]) pts.push_back(i);
  if (pts.empty() || pts.back() != i1) pts.push_back(i1);
  if (pts.size() < 5) {
    pts.clear();
    for (int i = i0; i <= i1; ++i) pts.push_back(i);
  }

  fit.i_start = i0;
  fit.i_end = i1;
  // Too few points or no sustained growth across the window: the curve is
  // oscillating, not growing.
  if (pts.size() < 5 || values[i1] < 2.0 * values[pts.front()]) {
    fit.periodic = true;
    return fit;
  }

  // Fit only over established growth: discard the pre-growth plateau where
  // the curve is still within 2x of its initial value (for a wall far from
  // the thermal cloud the correlator sits near the harmonic value for many
  // periods before the wall-feeling tail states take over).
  const double v_onset = 2.0 * values[pts.front()];
  std::vector<int> grow;
  for (int i : pts)
    if (values[i] >= v_onset) grow.push_back(i);
  if (grow.size() < 5) grow = pts;

  std::vector<double> lt, lc, tt;
  for (int i : grow) {
    if (!(values[i] > 0.0) || !(times[i] > 0.0)) continue;
    lt.push_back(std::log(times[i]));
    tt.push_back(times[i]);
    lc.push_back(std::log(values[i]));
  }
  if (lc.size() < 5) {
    fit.periodic = true;
    return fit;
  }
  const LineFit power = line_fit(lt, lc);
  const LineFit expo = line_fit(tt, lc);
  fit.exponent = power.slope;
  fit.stderr_exponent = power.stderr_slope;
  fit.loglog_residual = power.rms;
  fit.semilog_residual = expo.rms;
  return fit;
}

EigenBasis otoc_basis(const PotentialSpec& spec, int n_states, int grid_n) {
  // Harmonic estimate of the highest retained energy; the wall only raises
  // levels, so the turning point bound stays valid.
  const double e_max = spec.hbar * spec.omega0() * (2.0 * n_states + 2.0);
  const double turn = std::sqrt(2.0 * e_max / spec.k);
  const double pad = 8.0 / std::sqrt(spec.m * spec.omega0() / spec.hbar);
  const double x_lo = -(turn + pad);
  const double x_hi = spec.is_soft() ? turn + pad : std::min(spec.x_w, turn + pad);
  Grid g = build_grid(x_lo, x_hi, grid_n);
  return eigensolve(spec, g, n_states);
}

std::vector<OtocScanRow> otoc_growth_scan(const std::vector<PotentialSpec>& specs,
                                          const std::vector<double>& betas,
                                          const std::vector<double>& times,
                                          int n_states, int n_thermal,
                                          double fit_t_start) {
  std::vector<OtocScanRow> rows;
  for (const PotentialSpec& spec : specs) {
    EigenBasis basis = otoc_basis(spec, n_states);
    // One c_n table per wall position, shared by every temperature.
    Eigen::MatrixXd cn =
        otoc_microcanonical_all(basis, times, n_thermal, spec.m, spec.hbar);
    const double e0 = basis.energies[0];
    for (double beta : betas) {
      double z = 0.0;
      Eigen::VectorXd w(n_thermal);
      for (int n = 0; n < n_thermal; ++n) {
        w[n] = std::exp(-beta * (basis.energies[n] - e0));
        z += w[n];
      }
      const double tail = std::exp(-beta * (basis.energies[n_thermal] - e0)) / z;
      if (tail >= 1e-8)
        throw ThermalTailUncaptured("otoc_growth_scan: n_thermal too small for beta " +
                                    std::to_string(beta));
      std::vector<double> ct(times.size());
      for (size_t it = 0; it < times.size(); ++it)
        ct[it] = cn.row(it).dot(w) / z;

      OtocScanRow row;
      row.x_w = spec.x_w;
      row.beta = beta;
      row.fit = otoc_growth_fit(times, ct, fit_t_start);
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace qimpact
