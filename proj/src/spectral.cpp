#include "qimpact/spectral.hpp"

#include <lapacke.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace qimpact {

namespace {

VectorXd sample_potential(const PotentialSpec& spec, const Grid& grid) {
  const bool hard = !spec.is_soft();
  if (hard && grid.x_max > spec.x_w + 1e-12 * std::abs(spec.x_w) + 1e-12) {
    // Wall inside the domain: the grid must end on the wall so the
    // Dirichlet boundary realizes it exactly.
    throw InvalidGrid("eigensolve: hard-wall grid must end at or before x_w");
  }
  VectorXd v(grid.n - 2);
  for (int i = 1; i < grid.n - 1; ++i) {
    const double x = grid.x(i);
    if (hard) {
      v[i - 1] = 0.5 * spec.k * x * x;  // A_f ignored for the static problem
    } else {
      PotentialSpec s = spec;
      s.A_f = 0.0;
      v[i - 1] = potential_value(s, x, 0.0);
    }
  }
  return v;
}

}  // namespace

EigenBasis eigensolve(const PotentialSpec& spec, const Grid& grid, int n_states,
                      int n_modes) {
  spec.validate();
  if (n_states < 1) throw TooManyStates("eigensolve: n_states must be positive");
  if (n_states > grid.n / 4)
    throw TooManyStates("eigensolve: n_states exceeds n/4 discretization guard");

  const int n_int = grid.n - 2;
  int M = n_modes;
  if (M <= 0) M = std::max(600, 3 * n_states);
  if (M > n_int) M = n_int;
  if (M < n_states) M = n_states;

  const double L = grid.x_max - grid.x_min;
  const double dx = grid.dx();
  const VectorXd v = sample_potential(spec, grid);

  // Discrete-orthonormal sine modes on the interior points.
  Eigen::MatrixXd modes(n_int, M);
  const double scale = std::sqrt(2.0 / (n_int + 1));
  for (int k = 0; k < M; ++k)
    for (int i = 0; i < n_int; ++i)
      modes(i, k) = scale * std::sin(M_PI * (k + 1) * (i + 1) / double(n_int + 1));

  Eigen::MatrixXd H = modes.transpose() * v.asDiagonal() * modes;
  const double kin = spec.hbar * spec.hbar / (2.0 * spec.m);
  for (int k = 0; k < M; ++k) {
    const double p = M_PI * (k + 1) / L;
    H(k, k) += kin * p * p;
  }

  // Lowest n_states eigenpairs of the symmetric projected Hamiltonian.
  std::vector<double> w(M), z(static_cast<size_t>(M) * n_states);
  std::vector<lapack_int> isuppz(2 * static_cast<size_t>(n_states));
  lapack_int found = 0;
  lapack_int info = LAPACKE_dsyevr(
      LAPACK_COL_MAJOR, 'V', 'I', 'L', M, H.data(), M, 0.0, 0.0, 1, n_states,
      0.0, &found, w.data(), z.data(), M, isuppz.data());
  if (info != 0 || found < n_states)
    throw Error("eigensolve: LAPACK dsyevr failed");

  Eigen::Map<Eigen::MatrixXd> zc(z.data(), M, n_states);
  Eigen::MatrixXd interior = modes * zc;

  EigenBasis basis;
  basis.grid = grid;
  basis.n_states = n_states;
  basis.energies = Eigen::Map<VectorXd>(w.data(), n_states);
  basis.states = Eigen::MatrixXd::Zero(grid.n, n_states);
  const double norm = 1.0 / std::sqrt(dx);
  for (int s = 0; s < n_states; ++s) {
    basis.states.block(1, s, n_int, 1) = interior.col(s) * norm;
    // Sign convention: first significant sample positive.
    for (int i = 1; i < grid.n - 1; ++i) {
      if (std::abs(basis.states(i, s)) > 1e-8) {
        if (basis.states(i, s) < 0.0) basis.states.col(s) = -basis.states.col(s);
        break;
      }
    }
  }
  return basis;
}

double numerov_verify(const PotentialSpec& spec, const Grid& grid, double E_approx) {
  spec.validate();
  const int refine = 4;
  const int n = refine * (grid.n - 1) + 1;
  const double dx = (grid.x_max - grid.x_min) / (n - 1);
  const double pref = 2.0 * spec.m / (spec.hbar * spec.hbar);

  VectorXd v(n);
  for (int i = 0; i < n; ++i) {
    const double x = grid.x_min + i * dx;
    if (spec.is_soft()) {
      PotentialSpec s = spec;
      s.A_f = 0.0;
      v[i] = potential_value(s, x, 0.0);
    } else {
      v[i] = 0.5 * spec.k * x * x;
    }
  }

  double E = E_approx;
  const double h2 = dx * dx;
  VectorXd psi(n), f(n);
  for (int iter = 0; iter < 200; ++iter) {
    for (int i = 0; i < n; ++i) f[i] = pref * (v[i] - E);

    // Match at the leftmost classical turning point.
    int m = -1;
    for (int i = 0; i < n; ++i) {
      if (f[i] <= 0.0) {
        m = i;
        break;
      }
    }
    if (m < 2 || m > n - 3)
      throw NoConvergence("numerov_verify: no interior turning point at this energy");

    // Truncate the sweeps where the WKB tail drops below representable
    // range; integrating from deeper in the forbidden region overflows.
    int lo = 0;
    {
      double action = 0.0;
      for (int i = m; i > 0; --i) {
        if (f[i] > 0.0) action += std::sqrt(f[i]) * dx;
        if (action > 60.0) {
          lo = i;
          break;
        }
      }
    }
    int hi = n - 1;
    {
      int r = n - 1;
      for (int i = n - 1; i > m; --i) {
        if (f[i] <= 0.0) {
          r = i;
          break;
        }
      }
      double action = 0.0;
      for (int i = r; i < n - 1; ++i) {
        if (f[i] > 0.0) action += std::sqrt(f[i]) * dx;
        if (action > 60.0) {
          hi = i;
          break;
        }
      }
    }
    psi.setZero();

    auto y_of = [&](double p, int i) { return (1.0 - h2 * f[i] / 12.0) * p; };

    // Outward sweep from the left.
    psi[lo] = 0.0;
    psi[lo + 1] = 1e-10;
    {
      double ym1 = y_of(psi[lo], lo), y0 = y_of(psi[lo + 1], lo + 1);
      for (int i = lo + 1; i < m + 1; ++i) {
        const double y1 = 2.0 * y0 - ym1 + h2 * f[i] * psi[i];
        psi[i + 1] = y1 / (1.0 - h2 * f[i + 1] / 12.0);
        ym1 = y0;
        y0 = y1;
      }
    }
    const double left_m = psi[m];

    // Inward sweep from the right.
    psi[hi] = 0.0;
    psi[hi - 1] = 1e-10;
    {
      double yp1 = y_of(psi[hi], hi), y0 = y_of(psi[hi - 1], hi - 1);
      for (int i = hi - 1; i > m; --i) {
        const double y1 = 2.0 * y0 - yp1 + h2 * f[i] * psi[i];
        psi[i - 1] = y1 / (1.0 - h2 * f[i - 1] / 12.0);
        yp1 = y0;
        y0 = y1;
      }
    }

    // Join: scale the inward branch so the solutions agree at m. The merged
    // vector is outward for i < m and inward for i > m.
    if (psi[m] == 0.0) throw NoConvergence("numerov_verify: degenerate match point");
    const double s = left_m / psi[m];
    for (int i = m; i < n; ++i) psi[i] *= s;

    // Cooley energy correction from the kink at the match point.
    double norm = 0.0;
    for (int i = 0; i < n; ++i) norm += psi[i] * psi[i];
    const double ym = y_of(psi[m], m);
    const double yp = y_of(psi[m + 1], m + 1);
    const double yq = y_of(psi[m - 1], m - 1);
    const double dE =
        (psi[m] / norm) * (-(yp - 2.0 * ym + yq) / h2 + f[m] * psi[m]) / pref;

    E += dE;
    if (!std::isfinite(E))
      throw NoConvergence("numerov_verify: energy diverged");
    if (std::abs(dE) < 1e-10) return E;
  }
  throw NoConvergence("numerov_verify: no convergence in 200 iterations");
}

Eigen::MatrixXd position_matrix(const EigenBasis& basis) {
  const int ns = basis.n_states;
  const double dx = basis.grid.dx();
  VectorXd x = basis.grid.positions();
  Eigen::MatrixXd upper = basis.states.transpose() * x.asDiagonal() * basis.states * dx;
  Eigen::MatrixXd out(ns, ns);
  for (int i = 0; i < ns; ++i)
    for (int j = i; j < ns; ++j) out(i, j) = out(j, i) = upper(i, j);
  return out;
}

void save_basis(const EigenBasis& basis, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("save_basis: cannot open " + path);
  const char magic[8] = {'q', 'i', 'b', 'a', 's', 'i', 's', '1'};
  f.write(magic, 8);
  auto wd = [&](double d) { f.write(reinterpret_cast<const char*>(&d), 8); };
  auto wi = [&](std::int64_t i) { f.write(reinterpret_cast<const char*>(&i), 8); };
  wd(basis.grid.x_min);
  wd(basis.grid.x_max);
  wi(basis.grid.n);
  wi(basis.n_states);
  f.write(reinterpret_cast<const char*>(basis.energies.data()), 8 * basis.n_states);
  f.write(reinterpret_cast<const char*>(basis.states.data()),
          8 * static_cast<std::streamsize>(basis.grid.n) * basis.n_states);
}

EigenBasis load_basis(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("load_basis: cannot open " + path);
  char magic[8];
  f.read(magic, 8);
  if (std::string(magic, 8) != "qibasis1") throw Error("load_basis: bad magic");
  auto rd = [&]() {
    double d;
    f.read(reinterpret_cast<char*>(&d), 8);
    return d;
  };
  auto ri = [&]() {
    std::int64_t i;
    f.read(reinterpret_cast<char*>(&i), 8);
    return i;
  };
  EigenBasis b;
  b.grid.x_min = rd();
  b.grid.x_max = rd();
  b.grid.n = static_cast<int>(ri());
  b.n_states = static_cast<int>(ri());
  b.energies.resize(b.n_states);
  f.read(reinterpret_cast<char*>(b.energies.data()), 8 * b.n_states);
  b.states.resize(b.grid.n, b.n_states);
  f.read(reinterpret_cast<char*>(b.states.data()),
         8 * static_cast<std::streamsize>(b.grid.n) * b.n_states);
  if (!f) throw Error("load_basis: truncated file");
  return b;
}

std::string basis_cache_key(const PotentialSpec& spec, const Grid& grid, int n_states) {
  // FNV-1a over the exact field bytes rendered as text (stable across runs).
  std::ostringstream os;
  os.precision(17);
  os << static_cast<int>(spec.variant) << '|' << spec.k << '|' << spec.m << '|'
     << spec.hbar << '|' << spec.x_w << '|' << spec.A << '|' << spec.c << '|'
     << grid.x_min << '|' << grid.x_max << '|' << grid.n << '|' << n_states;
  const std::string s = os.str();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace qimpact
