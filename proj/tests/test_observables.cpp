#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "qimpact/observables.hpp"
#include "qimpact/spectral.hpp"

using namespace qimpact;

namespace {

PotentialSpec harmonic_spec() {
  PotentialSpec s;
  s.variant = PotentialVariant::HardWall;
  s.x_w = 1e9;
  return s;
}

}  // namespace

TEST_CASE("entropy of a Gaussian density matches the closed form") {
  Grid g = build_grid(-20.0, 20.0, 2048);
  WaveState psi = gaussian_packet(g, 0.0, 0.5, 0.0);
  const double expect = 0.5 * std::log(2.0 * M_PI * std::exp(1.0) * 0.5);
  CHECK(std::abs(entropy(psi) - expect) < 1e-7);
}

TEST_CASE("entropy of a uniform density is ln of its width") {
  Grid g = build_grid(0.0, 7.0, 1400);
  const double width = g.n * g.dx();
  WaveState psi;
  psi.grid = g;
  psi.t = 0.0;
  psi.psi = VectorXcd::Constant(g.n, Complex(1.0 / std::sqrt(width), 0.0));
  CHECK(std::abs(entropy(psi) - std::log(width)) < 1e-6);
}

TEST_CASE("entropy is invariant under translation and global phase") {
  Grid g = build_grid(-20.0, 20.0, 2048);
  WaveState a = gaussian_packet(g, -6.0, 0.7, 0.0);
  // Shift by an exact number of grid cells so the sampled densities coincide.
  const double shift = 512 * g.dx();
  WaveState b = gaussian_packet(g, -6.0 + shift, 0.7, 0.0);
  CHECK(std::abs(entropy(a) - entropy(b)) < 1e-10);

  WaveState c = a;
  c.psi *= std::polar(1.0, 2.13);
  CHECK(entropy(c) == doctest::Approx(entropy(a)).epsilon(1e-14));
  CHECK(entropy(a) > 0.0);
}

TEST_CASE("wigner function of the Gaussian ground state") {
  Grid g = build_grid(-12.0, 12.0, 256);
  WaveState psi = gaussian_packet(g, 0.0, 0.5, 0.0);
  WignerField wf = wigner(psi, g.n);

  // Closed form (1/pi) exp(-x^2/(2 s2) - 2 s2 p^2), s2 = 0.5.
  double max_err = 0.0, min_w = 0.0;
  for (int i = 0; i < g.n; ++i) {
    const double x = g.x(i);
    for (int k = 0; k < wf.p.size(); ++k) {
      const double exact = std::exp(-x * x - wf.p[k] * wf.p[k]) / M_PI;
      max_err = std::max(max_err, std::abs(wf.w(i, k) - exact));
      min_w = std::min(min_w, wf.w(i, k));
    }
  }
  CHECK(max_err < 1e-4);
  CHECK(min_w > -1e-8);

  const double total = wf.w.sum() * g.dx() * wf.dp;
  CHECK(std::abs(total - 1.0) < 1e-6);
}

TEST_CASE("wigner x-marginal reproduces the position density") {
  Grid g = build_grid(-12.0, 12.0, 200);
  WaveState psi = gaussian_packet(g, -2.0, 0.8, 1.3);
  WignerField wf = wigner(psi, 256);
  double l1 = 0.0;
  for (int i = 0; i < g.n; ++i) {
    const double marginal = wf.w.row(i).sum() * wf.dp;
    l1 += std::abs(marginal - std::norm(psi.psi[i]));
  }
  CHECK(l1 * g.dx() < 1e-5);
}

TEST_CASE("wigner function of an even superposition goes negative") {
  Grid g = build_grid(-15.0, 15.0, 512);
  EigenBasis basis = eigensolve(harmonic_spec(), g, 4);
  WaveState psi;
  psi.grid = g;
  psi.t = 0.0;
  psi.psi = ((basis.states.col(0) + basis.states.col(2)) / std::sqrt(2.0)).cast<Complex>();
  WignerField wf = wigner(psi, g.n);
  CHECK(wf.w.minCoeff() < -1e-3);
}

TEST_CASE("expectation values of constructed packets") {
  Grid g = build_grid(-20.0, 20.0, 4096);
  WaveState ground = gaussian_packet(g, 0.0, 0.5, 0.0);
  Moments m0 = expectations(ground);
  CHECK(std::abs(m0.x) < 1e-8);
  CHECK(std::abs(m0.x2 - 0.5) < 1e-6);
  CHECK(std::abs(m0.p) < 1e-8);
  CHECK(std::abs(m0.p2 - 0.5) < 1e-4);

  Grid fine = build_grid(-8.0, 8.0, 16384);
  WaveState boosted = gaussian_packet(fine, 0.0, 0.25, 0.5);
  CHECK(std::abs(expectations(boosted).p - 0.5) < 1e-6);
}

TEST_CASE("uncertainty product of a non-Gaussian centered state") {
  Grid g = build_grid(-20.0, 20.0, 4096);
  EigenBasis basis = eigensolve(harmonic_spec(), g, 4);
  WaveState psi;
  psi.grid = g;
  psi.t = 0.0;
  psi.psi = ((basis.states.col(0) + basis.states.col(2)) / std::sqrt(2.0)).cast<Complex>();
  Moments m = expectations(psi);
  CHECK(std::abs(m.x) < 1e-8);
  CHECK(std::abs(m.p) < 1e-8);
  // <x^2> = 3/2 + 1/sqrt(2), <p^2> = 3/2 - 1/sqrt(2) for (phi0+phi2)/sqrt 2.
  CHECK(m.x2 == doctest::Approx(1.5 + M_SQRT1_2).epsilon(1e-4));
  CHECK(m.p2 == doctest::Approx(1.5 - M_SQRT1_2).epsilon(1e-3));
  CHECK(m.x2 * m.p2 >= 0.25);
}

TEST_CASE("stroboscopic density: constant input, permutation invariance, guard") {
  Grid g = build_grid(-10.0, 10.0, 256);
  WaveState psi = gaussian_packet(g, 1.0, 0.6, 0.0);

  std::vector<WaveState> constant(24, psi);
  VectorXd rho = stroboscopic_density(constant, 4);
  double l1 = 0.0;
  for (int i = 0; i < g.n; ++i) l1 += std::abs(rho[i] - std::norm(psi.psi[i]));
  CHECK(l1 * g.dx() < 1e-12);

  std::vector<WaveState> mixed;
  for (int s = 0; s < 20; ++s)
    mixed.push_back(gaussian_packet(g, -3.0 + 0.3 * s, 0.5 + 0.02 * s, 0.0));
  VectorXd a = stroboscopic_density(mixed, 0);
  std::mt19937 rng(7);
  std::shuffle(mixed.begin(), mixed.end(), rng);
  VectorXd b = stroboscopic_density(mixed, 0);
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-14);

  CHECK(std::abs(a.sum() * g.dx() - 1.0) < 1e-12);
  CHECK_THROWS_AS(stroboscopic_density(constant, 10), TooFewSamples);
}

TEST_CASE("entropy_series carries sampling metadata") {
  Grid g = build_grid(-10.0, 10.0, 128);
  std::vector<WaveState> states(3, gaussian_packet(g, 0.0, 0.5, 0.0));
  TimeSeries ts = entropy_series(states, 0.1);
  CHECK(ts.size() == 3);
  CHECK(ts.dt_sample == 0.1);
  CHECK(std::abs(ts.values[0] - ts.values[2]) < 1e-14);
}
