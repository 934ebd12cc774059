#include "qimpact/classical.hpp"

#include <cmath>
#include <limits>

namespace qimpact {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Closed-form driven oscillator segment from a start state:
// x(t) = C cos w(t-t0) + S sin w(t-t0) + B sin(wf t).
struct FreeFlow {
  double w, wf, B, C, S, t0;

  double x(double t) const {
    const double d = t - t0;
    return C * std::cos(w * d) + S * std::sin(w * d) + B * std::sin(wf * t);
  }
  double v(double t) const {
    const double d = t - t0;
    return w * (-C * std::sin(w * d) + S * std::cos(w * d)) +
           B * wf * std::cos(wf * t);
  }
};

FreeFlow make_flow(const ClassicalParams& p, const ClassicalState& s) {
  FreeFlow f;
  f.w = std::sqrt(p.k / p.m);
  f.wf = p.omega_f;
  f.t0 = s.t;
  if (p.A_f != 0.0) {
    const double denom = f.w * f.w - f.wf * f.wf;
    if (std::abs(denom) < 1e-9)
      throw ResonantForcing("classical: forcing at the natural frequency");
    f.B = (p.A_f / p.m) / denom;
  } else {
    f.B = 0.0;
  }
  f.C = s.x - f.B * std::sin(f.wf * s.t);
  f.S = (s.v - f.B * f.wf * std::cos(f.wf * s.t)) / f.w;
  return f;
}

// First time in (t_start, t_max] with x = x_w, or +inf. The flow must start
// on or below the wall.
double next_impact(const FreeFlow& flow, double x_w, double t_start, double t_max) {
  const double period = 2.0 * M_PI / flow.w;
  const double scan =
      (flow.B != 0.0 ? std::min(period, 2.0 * M_PI / flow.wf) : period) / 64.0;

  auto f = [&](double t) { return flow.x(t) - x_w; };
  double t1 = t_start + 1e-9 * scan;
  if (f(t1) > 0.0) t1 = t_start;  // started below the wall, not on it
  double f1 = f(t1);
  while (t1 < t_max) {
    const double t2 = std::min(t1 + scan, t_max);
    const double f2 = f(t2);
    if (f1 <= 0.0 && f2 > 0.0) {
      // Bisection bracket, then Newton polish.
      double a = t1, b = t2;
      for (int i = 0; i < 100 && (b - a) > 1e-15 * std::max(1.0, b); ++i) {
        const double mid = 0.5 * (a + b);
        (f(mid) > 0.0 ? b : a) = mid;
      }
      double t = 0.5 * (a + b);
      for (int i = 0; i < 3; ++i) {
        const double deriv = flow.v(t);
        if (deriv == 0.0) break;
        t -= f(t) / deriv;
      }
      if (t < a || t > b) t = 0.5 * (a + b);
      return t;
    }
    t1 = t2;
    f1 = f2;
    if (t2 >= t_max) break;
  }
  return kInf;
}

void validate(const ClassicalParams& p, const ClassicalState& ic) {
  if (!(p.r > 0.0 && p.r <= 1.0)) throw Error("classical: restitution must be in (0, 1]");
  if (!(p.k > 0.0 && p.m > 0.0)) throw Error("classical: k and m must be positive");
  if (ic.x > p.x_w + 1e-12) throw Error("classical: initial position beyond the wall");
}

}  // namespace

ClassicalTrajectory simulate_impact(const ClassicalParams& params,
                                    const ClassicalState& ic, double T,
                                    double dt_sample) {
  validate(params, ic);
  if (!(T > 0.0) || !(dt_sample > 0.0)) throw Error("classical: bad T or dt_sample");

  ClassicalTrajectory out;
  ClassicalState cur = ic;
  const double t_end = ic.t + T;
  const double guard_window =
      params.omega_f > 0.0 ? 2.0 * M_PI / params.omega_f : 2.0 * M_PI / std::sqrt(params.k / params.m);
  long window_impacts = 0;
  double window_start = ic.t;
  long next_sample = 0;

  while (cur.t < t_end) {
    FreeFlow flow = make_flow(params, cur);
    const double t_hit = next_impact(flow, params.x_w, cur.t, t_end);
    const double t_stop = std::min(t_hit, t_end);

    for (; ic.t + next_sample * dt_sample <= t_stop + 1e-12 * dt_sample; ++next_sample) {
      const double ts = ic.t + next_sample * dt_sample;
      if (ts < cur.t - 1e-12 * dt_sample) continue;
      const double xs = std::min(flow.x(ts), params.x_w);
      out.samples.push_back({xs, flow.v(ts), ts});
    }
    if (t_hit > t_end) break;

    const double v_minus = flow.v(t_hit);
    cur.t = t_hit;
    cur.x = params.x_w;
    cur.v = -params.r * v_minus;
    out.impact_times.push_back(t_hit);

    if (t_hit - window_start > guard_window) {
      window_start = t_hit;
      window_impacts = 0;
    }
    if (++window_impacts > 1000000)
      throw StuckAtWall("simulate_impact: impact chatter exceeds 1e6 per period");
    if (std::abs(cur.v) < 1e-14)
      throw StuckAtWall("simulate_impact: zero-velocity rebound");
  }
  return out;
}

double lyapunov_classical(const ClassicalParams& params, const ClassicalState& ic,
                          double T) {
  validate(params, ic);
  if (!(T > 0.0)) throw Error("classical: bad T");

  const double w = std::sqrt(params.k / params.m);
  const double t_end = ic.t + T;
  const double transient = ic.t + 0.2 * T;

  double ux = 1.0, uv = 0.0;
  double acc = 0.0;
  auto rotate = [&](double dt) {
    const double c = std::cos(w * dt), s = std::sin(w * dt);
    const double nx = c * ux + s / w * uv;
    const double nv = -w * s * ux + c * uv;
    ux = nx;
    uv = nv;
  };

  ClassicalState cur = ic;
  long guard = 0;
  while (cur.t < t_end) {
    FreeFlow flow = make_flow(params, cur);
    const double t_hit = next_impact(flow, params.x_w, cur.t, t_end);
    if (t_hit > t_end) {
      rotate(t_end - cur.t);
      break;
    }
    rotate(t_hit - cur.t);

    const double v_minus = flow.v(t_hit);
    const double a_minus =
        -(params.k / params.m) * params.x_w + (params.A_f / params.m) * std::sin(params.omega_f * t_hit);
    // Saltation for the velocity-reversal law.
    const double s00 = -params.r, s10 = (1.0 + params.r) * a_minus / v_minus,
                 s11 = -params.r;
    const double nx = s00 * ux;
    const double nv = s10 * ux + s11 * uv;
    ux = nx;
    uv = nv;

    const double norm = std::hypot(ux, uv);
    if (norm > 0.0) {
      if (t_hit > transient) acc += std::log(norm);
      ux /= norm;
      uv /= norm;
    }

    cur.t = t_hit;
    cur.x = params.x_w;
    cur.v = -params.r * v_minus;
    if (std::abs(cur.v) < 1e-14)
      throw StuckAtWall("lyapunov_classical: zero-velocity rebound");
    if (++guard > 100000000) throw StuckAtWall("lyapunov_classical: impact overflow");
  }
  const double norm = std::hypot(ux, uv);
  if (norm > 0.0) acc += std::log(norm);
  return acc / (0.8 * T);
}

std::vector<ClassicalScanPoint> bifurcation_classical(double x_w_lo, double x_w_hi,
                                                      double step,
                                                      ClassicalParams params,
                                                      bool continuation,
                                                      int n_periods, int n_skip) {
  if (!(step > 0.0) || !(x_w_hi >= x_w_lo))
    throw Error("bifurcation_classical: empty or inverted range");
  if (n_skip >= n_periods) throw Error("bifurcation_classical: n_skip >= n_periods");

  const double w = std::sqrt(params.k / params.m);
  const double t_strobe =
      params.omega_f > 0.0 ? 2.0 * M_PI / params.omega_f : 2.0 * M_PI / w;

  auto cold_start = [&](double x_w) {
    ClassicalState s;
    double b = 0.0;
    if (params.A_f != 0.0) b = (params.A_f / params.m) / (w * w - params.omega_f * params.omega_f);
    s.x = std::min(0.0, x_w - 1e-3);
    s.v = b * params.omega_f;
    s.t = 0.0;
    return s;
  };

  std::vector<ClassicalScanPoint> points;
  const int n_points = static_cast<int>(std::floor((x_w_hi - x_w_lo) / step + 0.5)) + 1;
  ClassicalState carry;
  bool have_carry = false;
  for (int ip = 0; ip < n_points; ++ip) {
    params.x_w = x_w_lo + ip * step;
    ClassicalState ic = (continuation && have_carry && carry.x <= params.x_w)
                            ? carry
                            : cold_start(params.x_w);

    ClassicalTrajectory traj =
        simulate_impact(params, ic, n_periods * t_strobe, t_strobe);
    ClassicalScanPoint point;
    point.x_w = params.x_w;
    for (size_t j = n_skip; j < traj.samples.size(); ++j)
      point.strobe.push_back(traj.samples[j].x);
    point.lambda = lyapunov_classical(params, ic, n_periods * t_strobe);
    points.push_back(std::move(point));

    carry = traj.samples.back();
    have_carry = true;
  }
  return points;
}

}  // namespace qimpact
