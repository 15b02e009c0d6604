#include "hardyq/radial_ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hardyq/dopri.hpp"
#include "hardyq/error.hpp"
#include "hardyq/expansion.hpp"

namespace hardyq {

const char* to_string(Chart chart) noexcept {
  return chart == Chart::OriginW ? "ORIGIN_W" : "INFINITY_PHI";
}

const char* to_string(StopReason reason) noexcept {
  switch (reason) {
    case StopReason::ReachedEnd: return "reached-end";
    case StopReason::BlowUp: return "blow-up";
    case StopReason::TurnUp: return "turn-up";
    case StopReason::Overflow: return "overflow";
  }
  return "unknown";
}

const char* to_string(Classification c) noexcept {
  switch (c) {
    case Classification::BlowUp: return "TYPE_BLOWUP";
    case Classification::TurnUp: return "TYPE_TURNUP";
    case Classification::Undecided: return "UNDECIDED";
  }
  return "unknown";
}

double signed_root(double x, double p) {
  const double ax = std::abs(x);
  if (ax <= 1e-300) return 0.0;
  return std::copysign(std::pow(ax, 1.0 / (p - 1.0)), x);
}

namespace {

void guard(double v, double logu, double v_cap, double logu_cap) {
  if ((v_cap > 0.0 && std::abs(v) > v_cap) || (logu_cap > 0.0 && logu > logu_cap))
    throw Error(ErrorCode::Overflow, "chart state exceeds configured caps");
}

// (p-1)|x|^{p/(p-1)} - (N-p)x + μ, which is Γ_μ(ψ(x)) for x >= 0 and the
// exact continuation of the w-equation for x < 0.
double gamma_extended(double x, double psi, const ProblemParams& q) {
  return (q.p - 1.0) * std::abs(x) * std::abs(psi) - (q.N - q.p) * x + q.mu;
}

}  // namespace

ChartRates rhs_origin(double r, double w, double logu, const ProblemParams& q,
                      const Nonlinearity& f, double v_cap, double logu_cap) {
  guard(w, logu, v_cap, logu_cap);
  const double psi = signed_root(w, q.p);
  ChartRates out;
  out.dv = gamma_extended(w, psi, q) / r +
           std::pow(r, q.p - 1.0) * (-q.m + f.ratio_from_log(logu, q.p));
  out.dlogu = -psi / r;
  return out;
}

ChartRates rhs_infinity(double r, double phi, double logu, const ProblemParams& q,
                        const Nonlinearity& f, double v_cap, double logu_cap) {
  guard(phi, logu, v_cap, logu_cap);
  const double psi = signed_root(phi, q.p);
  ChartRates out;
  out.dv = (q.p - 1.0) * std::abs(phi) * std::abs(psi) - (q.N - 1.0) / r * phi +
           q.mu * std::pow(r, -q.p) - q.m + f.ratio_from_log(logu, q.p);
  out.dlogu = -psi;
  return out;
}

ChartRates chart_rates(Chart chart, double r, double v, double logu,
                       const ProblemParams& q, const Nonlinearity& f) {
  return chart == Chart::OriginW ? rhs_origin(r, v, logu, q, f)
                                 : rhs_infinity(r, v, logu, q, f);
}

double default_w_max(const ProblemParams& q, const Exponents& e) {
  return std::max(10.0 * std::pow(e.gamma2, q.p - 1.0),
                  10.0 * std::pow((std::abs(q.m) + 1.0) / (q.p - 1.0), q.p - 1.0));
}

RadialSolution integrate(Chart chart, const InitialState& init, double r_end, double tol,
                         const Caps& caps, const ProblemParams& q, const Nonlinearity& f) {
  validate(q);
  f.validate(q);
  if (!(init.r0 > 0.0) || !(r_end > 0.0))
    throw Error(ErrorCode::InvalidParams, "integration radii must be positive");
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidParams, "tol must be positive");

  const double w_max =
      caps.w_max > 0.0 ? caps.w_max : default_w_max(q, solve_exponents(q));
  const bool origin = chart == Chart::OriginW;

  using Stepper = DormandPrince<2>;
  // Origin chart: independent variable s = log r, so the 1/r scales of the
  // w-equation become O(1) and steps grow geometrically in r.
  Stepper::Rhs rhs = [&](double t, const Stepper::State& y) -> Stepper::State {
    if (origin) {
      const double r = std::exp(t);
      const double psi = signed_root(y[0], q.p);
      return {gamma_extended(y[0], psi, q) +
                  std::pow(r, q.p) * (-q.m + f.ratio_from_log(y[1], q.p)),
              -psi};
    }
    const ChartRates d = rhs_infinity(t, y[0], y[1], q, f);
    return {d.dv, d.dlogu};
  };

  RadialSolution sol;
  sol.chart = chart;
  sol.params = q;
  sol.f = f;
  sol.tol = tol;
  sol.r.push_back(init.r0);
  sol.v.push_back(init.v0);
  sol.logu.push_back(init.logu0);

  const auto observe = [&](const Stepper::Step& st) {
    const double r = origin ? std::exp(st.t) : st.t;
    const double v = st.y[0], lu = st.y[1];
    sol.r.push_back(r);
    sol.v.push_back(v);
    sol.logu.push_back(lu);
    if (std::abs(v) > caps.v_abs_max || lu > caps.logu_max) {
      sol.stop = StopReason::Overflow;
      return false;
    }
    if (caps.stop_on_turnup && v < 0.0) {
      sol.stop = StopReason::TurnUp;
      return false;
    }
    const double rp = std::pow(r, q.p - 1.0);
    const double w = origin ? v : v * rp;
    if (w > w_max * (1.0 + rp)) {
      sol.stop = StopReason::BlowUp;
      return false;
    }
    return true;
  };

  Stepper stepper(rhs, tol);
  const double t0 = origin ? std::log(init.r0) : init.r0;
  const double t1 = origin ? std::log(r_end) : r_end;
  const auto res = stepper.run(t0, {init.v0, init.logu0}, t1, observe);

  auto describe = [&](const char* what) {
    std::ostringstream os;
    os.precision(17);
    const double r = origin ? std::exp(res.last.t) : res.last.t;
    os << what << " in " << to_string(chart) << " chart at r=" << r
       << " (v=" << res.last.y[0] << ", logu=" << res.last.y[1] << ")";
    return os.str();
  };
  switch (res.outcome) {
    case Stepper::Outcome::Underflow:
      throw Error(ErrorCode::StepUnderflow, describe("step size underflow"));
    case Stepper::Outcome::Budget:
      throw Error(ErrorCode::NoConvergence, describe("step budget exhausted"));
    case Stepper::Outcome::NonFinite:
      throw Error(ErrorCode::Overflow, describe("non-finite right-hand side"));
    default:
      break;
  }
  if (origin && res.outcome == Stepper::Outcome::Reached) sol.r.back() = r_end;

  if (r_end < init.r0) {
    std::reverse(sol.r.begin(), sol.r.end());
    std::reverse(sol.v.begin(), sol.v.end());
    std::reverse(sol.logu.begin(), sol.logu.end());
  }
  return sol;
}

double log_slope(const RadialSolution& sol, std::size_t i) {
  const double psi = signed_root(sol.v[i], sol.params.p);
  return sol.chart == Chart::OriginW ? -psi / sol.r[i] : -psi;
}

SolutionPoint sample(const RadialSolution& sol, double r) {
  const std::size_t n = sol.size();
  if (n == 0) throw Error(ErrorCode::OutOfGrid, "empty solution");
  const double slack = 1e-12 * std::abs(sol.r.back());
  if (!(r >= sol.r.front() - slack && r <= sol.r.back() + slack)) {
    std::ostringstream os;
    os << "radius " << r << " outside solution grid [" << sol.r.front() << ", "
       << sol.r.back() << "]";
    throw Error(ErrorCode::OutOfGrid, os.str());
  }
  if (n == 1) return {sol.logu[0], sol.v[0]};
  r = std::clamp(r, sol.r.front(), sol.r.back());
  auto it = std::upper_bound(sol.r.begin(), sol.r.end(), r);
  std::size_t i = it == sol.r.begin() ? 0 : static_cast<std::size_t>(it - sol.r.begin()) - 1;
  if (i + 1 >= n) i = n - 2;

  const bool origin = sol.chart == Chart::OriginW;
  // Interpolate in the stepping variable (log r for the origin chart).
  const auto var = [&](double x) { return origin ? std::log(x) : x; };
  const double t0 = var(sol.r[i]), t1 = var(sol.r[i + 1]);
  const double h = t1 - t0;
  const double s = h == 0.0 ? 0.0 : (var(r) - t0) / h;
  const double jac0 = origin ? sol.r[i] : 1.0;
  const double jac1 = origin ? sol.r[i + 1] : 1.0;
  const ChartRates d0 =
      chart_rates(sol.chart, sol.r[i], sol.v[i], sol.logu[i], sol.params, sol.f);
  const ChartRates d1 =
      chart_rates(sol.chart, sol.r[i + 1], sol.v[i + 1], sol.logu[i + 1], sol.params, sol.f);

  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  const auto hermite = [&](double y0, double y1, double m0, double m1) {
    return h00 * y0 + h10 * h * m0 + h01 * y1 + h11 * h * m1;
  };
  SolutionPoint pt;
  pt.v = hermite(sol.v[i], sol.v[i + 1], d0.dv * jac0, d1.dv * jac1);
  pt.logu = hermite(sol.logu[i], sol.logu[i + 1], d0.dlogu * jac0, d1.dlogu * jac1);
  return pt;
}

Classification classify(const RadialSolution& sol) {
  switch (sol.stop) {
    case StopReason::BlowUp: return Classification::BlowUp;
    case StopReason::TurnUp: return Classification::TurnUp;
    case StopReason::Overflow:
      return sol.v.back() > 0.0 ? Classification::BlowUp : Classification::TurnUp;
    case StopReason::ReachedEnd: break;
  }
  return Classification::Undecided;
}

InitialState origin_initial_state(const Exponents& exps, double p, double C, double r0) {
  if (!(C > 0.0)) throw Error(ErrorCode::InvalidParams, "shooting amplitude must be positive");
  InitialState s;
  s.r0 = r0;
  s.v0 = std::pow(exps.gamma1, p - 1.0);
  s.logu0 = std::log(C) - exps.gamma1 * std::log(r0);
  return s;
}

namespace {

// Largest node r of `a` such that a and b agree in log u within tol on
// every node of a up to r.
double agreement_radius(const RadialSolution& a, const RadialSolution& b, double tol) {
  const double limit = std::min(a.r.back(), b.r.back());
  double last = a.r.front();
  for (std::size_t i = 0; i < a.size() && a.r[i] <= limit; ++i) {
    const double other = sample(b, a.r[i]).logu;
    if (std::abs(other - a.logu[i]) > tol) break;
    if (a.v[i] < 0.0) break;
    last = a.r[i];
  }
  return last;
}

void trim_above(RadialSolution& sol, double r_cut) {
  std::size_t keep = 0;
  while (keep < sol.size() && sol.r[keep] <= r_cut) ++keep;
  sol.r.resize(keep);
  sol.v.resize(keep);
  sol.logu.resize(keep);
}

}  // namespace

GroundState shoot_ground_state(const ProblemParams& q, const Nonlinearity& f,
                               const ShootingOptions& opts) {
  validate(q);
  f.validate(q);
  if (!(opts.C_lo > 0.0 && opts.C_hi > opts.C_lo))
    throw Error(ErrorCode::InvalidParams, "require 0 < C_lo < C_hi");
  if (!(opts.r0 > 0.0 && opts.r_max > opts.r0))
    throw Error(ErrorCode::InvalidParams, "require 0 < r0 < r_max");
  if (!(opts.tol_C > 0.0)) throw Error(ErrorCode::InvalidParams, "tol_C must be positive");

  GroundState gs;
  gs.exponents = solve_exponents(q);
  Caps caps = opts.caps;
  caps.stop_on_turnup = true;
  if (!(caps.w_max > 0.0)) caps.w_max = default_w_max(q, gs.exponents);

  const auto shoot = [&](double C) {
    RadialSolution s = integrate(Chart::OriginW,
                                 origin_initial_state(gs.exponents, q.p, C, opts.r0),
                                 opts.r_max, opts.tol, caps, q, f);
    s.amplitude = C;
    s.gamma1 = gs.exponents.gamma1;
    gs.history.push_back({C, classify(s), s.r.back()});
    return s;
  };

  RadialSolution lo = shoot(opts.C_lo);
  RadialSolution hi = shoot(opts.C_hi);
  const Classification c_lo = classify(lo), c_hi = classify(hi);
  if (c_lo == c_hi) {
    std::ostringstream os;
    os << "both bracket ends classify as " << to_string(c_lo) << "; widen [C_lo, C_hi]";
    throw Error(ErrorCode::SameClassification, os.str());
  }

  const auto finish_undecided = [&](RadialSolution s) {
    gs.C_star = s.amplitude;
    gs.r_reliable = s.r.back();
    gs.solution = std::move(s);
    return gs;
  };
  if (c_lo == Classification::Undecided) return finish_undecided(std::move(lo));
  if (c_hi == Classification::Undecided) return finish_undecided(std::move(hi));
  gs.below = c_lo;

  bool converged = false;
  for (int n = 0; n < opts.max_bisections; ++n) {
    const double C_lo = lo.amplitude, C_hi = hi.amplitude;
    const double mid_arith = 0.5 * (C_lo + C_hi);
    if (C_hi - C_lo <= opts.tol_C * mid_arith) {
      converged = true;
      break;
    }
    const bool geometric = C_hi > 2.0 * C_lo;
    // An undecided interior shot can be a non-decaying equilibrium (u == const
    // when f(u)/u^{p-1} = m), so other split points are tried before one is
    // accepted as the profile.
    RadialSolution s;
    Classification c = Classification::Undecided;
    for (double frac : {0.5, 0.381966011250105, 0.618033988749895}) {
      const double mid = geometric ? C_lo * std::pow(C_hi / C_lo, frac)
                                   : C_lo + frac * (C_hi - C_lo);
      if (mid <= C_lo || mid >= C_hi) continue;
      s = shoot(mid);
      c = classify(s);
      if (c != Classification::Undecided) break;
    }
    if (s.empty()) {
      converged = true;
      break;
    }
    if (c == Classification::Undecided) return finish_undecided(std::move(s));
    if (c == gs.below)
      lo = std::move(s);
    else
      hi = std::move(s);
  }
  if (!converged)
    throw Error(ErrorCode::NoGroundState,
                "bisection budget exhausted before the amplitude bracket closed");

  gs.C_star = 0.5 * (lo.amplitude + hi.amplitude);
  RadialSolution& longer = lo.r.back() >= hi.r.back() ? lo : hi;
  const RadialSolution& other = &longer == &lo ? hi : lo;
  gs.r_reliable = agreement_radius(longer, other, opts.separation_tol);
  gs.solution = std::move(longer);
  trim_above(gs.solution, gs.r_reliable);
  gs.solution.stop = StopReason::ReachedEnd;
  return gs;
}

bool shooting_monotone(const std::vector<ShotRecord>& history) {
  std::vector<ShotRecord> sorted;
  for (const auto& h : history)
    if (h.cls != Classification::Undecided) sorted.push_back(h);
  std::sort(sorted.begin(), sorted.end(),
            [](const ShotRecord& a, const ShotRecord& b) { return a.C < b.C; });
  int changes = 0;
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].cls != sorted[i - 1].cls) ++changes;
  return changes <= 1;
}

Handoff handoff(const RadialSolution& origin, double r_switch) {
  if (origin.chart != Chart::OriginW)
    throw Error(ErrorCode::InvalidParams, "handoff needs an origin-chart solution");
  if (origin.empty() || !(r_switch >= origin.r.front() && r_switch <= origin.r.back()))
    throw Error(ErrorCode::OutOfGrid, "r_switch outside the origin solution grid");
  const SolutionPoint pt = sample(origin, r_switch);
  if (!(pt.v > 0.0))
    throw Error(ErrorCode::DomainError, "handoff requires w(r_switch) > 0");
  return {r_switch, pt.v / std::pow(r_switch, origin.params.p - 1.0), pt.logu};
}

FarFieldMatch continue_to_infinity(const RadialSolution& origin,
                                   const FarFieldOptions& opts) {
  const ProblemParams& q = origin.params;
  validate_with_positive_mass(q);
  if (!(opts.r_end > opts.r_switch))
    throw Error(ErrorCode::InvalidParams, "require r_end > r_switch");

  FarFieldMatch out;
  out.handoff = handoff(origin, opts.r_switch);
  const ExpansionSeries series = build_series(q);
  const double burn = opts.burn_in > 0.0 ? opts.burn_in : 30.0 / series.alpha0;
  const double R = opts.r_end + burn;
  out.r_start = R;
  double phi_far = eval_series(series, R);
  if (!(phi_far > 0.0)) phi_far = series.phi_inf;

  Caps caps;
  caps.w_max = std::numeric_limits<double>::max();
  caps.logu_max = std::numeric_limits<double>::max();
  caps.v_abs_max = 1e12;

  const double rs = opts.r_switch;
  const auto run = [&](double logu_far) {
    RadialSolution s =
        integrate(Chart::InfinityPhi, {R, phi_far, logu_far}, rs, opts.tol, caps, q, origin.f);
    if (s.stop != StopReason::ReachedEnd)
      throw Error(ErrorCode::NoConvergence, "inward far-field integration hit a cap");
    return s;
  };

  const double b = decay_rate(q), a = decay_power(q);
  double x0 = out.handoff.logu0 - (b * (R - rs) + a * std::log(R / rs));
  RadialSolution s0 = run(x0);
  double g0 = s0.logu.front() - out.handoff.logu0;
  double x1 = x0 - g0;
  RadialSolution s1 = run(x1);
  double g1 = s1.logu.front() - out.handoff.logu0;
  const double scale = std::max(1.0, std::abs(out.handoff.logu0));
  int it = 2;
  while (std::abs(g1) > opts.match_tol * scale) {
    if (it >= opts.max_iterations || g1 == g0)
      throw Error(ErrorCode::NoConvergence, "far-field log u matching did not converge");
    const double x2 = x1 - g1 * (x1 - x0) / (g1 - g0);
    x0 = x1;
    g0 = g1;
    x1 = x2;
    s1 = run(x1);
    g1 = s1.logu.front() - out.handoff.logu0;
    ++it;
  }
  out.iterations = it;

  RadialSolution& sol = s1;
  // Keep one node past r_end so probe windows ending at r_end stay inside.
  std::size_t keep = 0;
  while (keep < sol.size() && sol.r[keep] < opts.r_end) ++keep;
  keep = std::min(keep + 1, sol.size());
  sol.r.resize(keep);
  sol.v.resize(keep);
  sol.logu.resize(keep);
  sol.amplitude = origin.amplitude;
  sol.gamma1 = origin.gamma1;
  out.phi_mismatch = std::abs(sol.v.front() - out.handoff.phi0);
  out.solution = std::move(sol);
  return out;
}

}  // namespace hardyq
