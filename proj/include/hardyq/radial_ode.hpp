#pragma once

#include <cstddef>
#include <vector>

#include "hardyq/exponents.hpp"
#include "hardyq/nonlinearity.hpp"
#include "hardyq/params.hpp"

namespace hardyq {

// Desingularized charts for the radial equation.
//   OriginW:     v = w   = -r^{p-1}|u'|^{p-2}u'/u^{p-1},  u' = -u ψ(w)/r
//   InfinityPhi: v = phi = -|u'|^{p-2}u'/u^{p-1},          u' = -u ψ(phi)
// with ψ(x) = sign(x)|x|^{1/(p-1)}.
enum class Chart { OriginW, InfinityPhi };

const char* to_string(Chart chart) noexcept;

enum class StopReason { ReachedEnd, BlowUp, TurnUp, Overflow };

const char* to_string(StopReason reason) noexcept;

struct RadialSolution {
  Chart chart = Chart::OriginW;
  std::vector<double> r;  // strictly increasing
  std::vector<double> logu;
  std::vector<double> v;
  ProblemParams params;
  Nonlinearity f;
  double amplitude = 0.0;
  double gamma1 = 0.0;
  double tol = 0.0;
  StopReason stop = StopReason::ReachedEnd;

  std::size_t size() const { return r.size(); }
  bool empty() const { return r.empty(); }
};

struct ChartRates {
  double dv = 0.0;
  double dlogu = 0.0;
};

// ψ(x) = sign(x)|x|^{1/(p-1)}.
double signed_root(double x, double p);

// Right-hand sides with respect to r. A non-positive `v_cap` disables the
// overflow guard; otherwise |v| > v_cap or logu > logu_cap throws Overflow.
ChartRates rhs_origin(double r, double w, double logu, const ProblemParams& params,
                      const Nonlinearity& f, double v_cap = 0.0,
                      double logu_cap = 0.0);
ChartRates rhs_infinity(double r, double phi, double logu,
                        const ProblemParams& params, const Nonlinearity& f,
                        double v_cap = 0.0, double logu_cap = 0.0);

ChartRates chart_rates(Chart chart, double r, double v, double logu,
                       const ProblemParams& params, const Nonlinearity& f);

// Caps used both as overflow guards and for shooting classification.
struct Caps {
  // Blow-up threshold on w; the test is w > w_max * (1 + r^{p-1}) so that
  // the linear growth w ~ phi_inf r^{p-1} of a decaying profile never trips
  // it. Non-positive selects default_w_max().
  double w_max = 0.0;
  bool stop_on_turnup = false;  // stop as soon as v < 0
  double logu_max = 700.0;
  double v_abs_max = 1e12;
};

double default_w_max(const ProblemParams& params, const Exponents& exps);

struct InitialState {
  double r0 = 0.0;
  double v0 = 0.0;
  double logu0 = 0.0;
};

// Adaptive Dormand-Prince integration of one chart from init.r0 to r_end
// (either direction). The origin chart is stepped in log r. Accepted steps
// form the stored grid, returned in increasing r. Cap triggers end the run
// early and are recorded in `stop`; StepUnderflow is thrown.
RadialSolution integrate(Chart chart, const InitialState& init, double r_end,
                         double tol, const Caps& caps, const ProblemParams& params,
                         const Nonlinearity& f);

struct SolutionPoint {
  double logu = 0.0;
  double v = 0.0;
};

// Cubic Hermite interpolation using the chart right-hand sides as node
// derivatives. OutOfGrid outside [r.front(), r.back()].
SolutionPoint sample(const RadialSolution& sol, double r);

// d(log u)/dr implied by the stored chart variable at node i.
double log_slope(const RadialSolution& sol, std::size_t i);

// ---------------------------------------------------------------- shooting

enum class Classification { BlowUp, TurnUp, Undecided };

const char* to_string(Classification c) noexcept;

Classification classify(const RadialSolution& sol);

struct ShootingOptions {
  double C_lo = 0.1;
  double C_hi = 10.0;
  double r0 = 1e-6;
  double r_max = 25.0;
  double tol = 1e-10;
  double tol_C = 1e-10;
  Caps caps;
  int max_bisections = 200;
  // Two bracket trajectories are treated as the same profile while their
  // log u differ by at most this much.
  double separation_tol = 1e-6;
};

struct ShotRecord {
  double C = 0.0;
  Classification cls = Classification::Undecided;
  double r_stop = 0.0;
};

struct GroundState {
  double C_star = 0.0;
  RadialSolution solution;  // origin chart, trimmed to [r0, r_reliable]
  std::vector<ShotRecord> history;
  Classification below = Classification::TurnUp;  // class of C < C_star
  double r_reliable = 0.0;
  Exponents exponents;
};

// w(r0) = γ1^{p-1}, log u(r0) = log C - γ1 log r0.
InitialState origin_initial_state(const Exponents& exps, double p, double C,
                                  double r0);

GroundState shoot_ground_state(const ProblemParams& params, const Nonlinearity& f,
                               const ShootingOptions& opts);

// Classes are one contiguous block per side when sorted by C.
bool shooting_monotone(const std::vector<ShotRecord>& history);

struct Handoff {
  double r0 = 0.0;
  double phi0 = 0.0;
  double logu0 = 0.0;
};

// phi0 = w(r_switch)/r_switch^{p-1}, logu continuous.
Handoff handoff(const RadialSolution& origin, double r_switch);

struct FarFieldOptions {
  double r_switch = 1.0;
  double r_end = 25.0;
  double tol = 1e-10;
  // Extra radius integrated inward before r_end; <= 0 picks 30/alpha0.
  double burn_in = 0.0;
  int max_iterations = 40;
  double match_tol = 1e-12;
};

struct FarFieldMatch {
  RadialSolution solution;  // infinity chart on [r_switch, r_end]
  Handoff handoff;
  // |phi(r_switch) - phi0|: the inward profile never sees phi0, so this is an
  // independent consistency measure of the shot amplitude.
  double phi_mismatch = 0.0;
  int iterations = 0;
  double r_start = 0.0;
};

// The phi chart is unstable outward (perturbations grow like e^{alpha0 r}),
// so the decaying branch is produced by integrating inward from
// r_end + burn_in, seeded with the expansion series, and matching log u to
// the origin trajectory at r_switch by a secant iteration on the far value.
FarFieldMatch continue_to_infinity(const RadialSolution& origin,
                                   const FarFieldOptions& opts);

}  // namespace hardyq
