#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hardyq/nonlinearity.hpp"
#include "hardyq/params.hpp"

namespace hardyq {

// Value and first two r-derivatives of a radial profile at one radius.
struct RadialJet {
  double u = 0.0;
  double du = 0.0;
  double d2u = 0.0;
};

// Which terms of the strong-form operator to keep in residual_radial.
struct ResidualTerms {
  double mass = 0.0;
  bool hardy = true;
  const Nonlinearity* f = nullptr;
};

// -(p-1)|u'|^{p-2}u'' - (N-1)/r |u'|^{p-2}u' - μ/r^p |u|^{p-2}u
//   + mass |u|^{p-2}u - f(u)
double residual_radial(const RadialJet& jet, double r, const ProblemParams& params,
                       const ResidualTerms& terms);

// Same operator on tabulated data at node i, derivatives from the
// three-point non-uniform centered stencil. InsufficientStencil at the ends.
double residual_radial(std::span<const double> r, std::span<const double> u,
                       std::size_t i, const ProblemParams& params,
                       const ResidualTerms& terms);

// ------------------------------------------------------------ origin side

// k(t) = (p-1)t^2 - (N-p)t
double k_func(double t, const ProblemParams& params);

// h(t) = |γ1 - (γ1-ε)t|^{p-2} [k(γ1-ε) t - k(γ1)] - μ|1-t|^{p-2}(1-t)
double h_func(double t, const ProblemParams& params, double gamma1, double eps);
double h_func(double t, const ProblemParams& params, double eps);

// (p-1) γ1^{p-2} (-p γ1 + N - p + ε) ε
double h_prime_at_zero(const ProblemParams& params, double gamma1, double eps);

// w0(r) = r^{-γ1}(1 + δ r^ε)
struct OriginBarrier {
  double delta = 0.0;
  double eps = 0.0;
  double gamma1 = 0.0;
};

// Requires μ > 0, δ in (0,1), ε in (0,p).
OriginBarrier make_origin_barrier(const ProblemParams& params, double delta,
                                  double eps);

RadialJet origin_barrier_jet(const OriginBarrier& b, double r);

// h~(r) = h(-δ r^ε) / ((1 + δ r^ε)^{p-1} r^p)
double origin_source(const OriginBarrier& b, double r, const ProblemParams& params);

struct OriginParamChoice {
  double delta_h = 0.0;
  double eps = 0.0;
  double r2 = 0.0;
  double h_prime0 = 0.0;
};

// Geometric t-grid {-2^{-j/8}}, j = 1 .. 8*60.
std::vector<double> default_t_grid();

// Largest sampled δ_h with 2h'(0)t <= h(t) <= h'(0)t/2 on every sampled
// t in [-δ_h, 0), then the largest log-sampled r2 < 1 with h~ <= -m on
// (0, r2]. NoValidDelta if no sample qualifies.
OriginParamChoice choose_origin_params(const ProblemParams& params,
                                       std::span<const double> t_grid = {},
                                       std::optional<double> eps = std::nullopt);

// ---------------------------------------------------------- infinity side

struct ExpProfile {
  double value = 0.0;
  double source = 0.0;
};

// α = ((m - ε)/(p-1))^{1/p} for the reduced mass m - ε.
double exp_profile_rate(const ProblemParams& params, double eps_mass);

// w1 = e^{-αr} solves -Δ_p w + (p-1)α^p w^{p-1} = (N-1)α^{p-1}/r · w^{p-1}.
ExpProfile exponential_profile(double r, double alpha, const ProblemParams& params);

// v_γ(r) = r^{-a} e^{-βr} (1 - γ r^{-δ}),  a = (N-1)/(p(p-1)), β = (m/(p-1))^{1/p}
struct InfinityBarrier {
  double gamma = 0.0;
  double delta = 0.0;
  double alpha_decay = 0.0;
  double beta = 0.0;
};

// Requires m > 0 and δ in (0, 1/2).
InfinityBarrier make_infinity_barrier(const ProblemParams& params, double gamma,
                                      double delta);

double infinity_barrier_value(const InfinityBarrier& b, double r);
RadialJet infinity_barrier_jet(const InfinityBarrier& b, double r);

struct AValue {
  double A = 0.0;
  double dA = 0.0;
};

// A = -v_γ'/v_γ = β + a/r - δγ r^{-δ-1}/(1 - γ r^{-δ}), with its exact
// derivative. Pole when 1 - γ r^{-δ} <= 0.
AValue A_func(const InfinityBarrier& b, double r);

// Q = m + (p-1)A^{p-2}A' - (p-1)A^p + (N-1)A^{p-1}/r, so that
// -Δ_p v_γ + m v_γ^{p-1} = Q v_γ^{p-1}.
double Q_func(const InfinityBarrier& b, double r, const ProblemParams& params);

// φ_∞ p(p-1) δ γ, the coefficient of r^{-(δ+1)} in Q.
double Q_leading(const InfinityBarrier& b, const ProblemParams& params);

// Smallest sampled R such that pred holds for Q at every log-spaced sample
// in [R, r_hi]; used for R2 (Q <= 0, γ = -1) and R1 (Q >= 2μ/r^p, γ = +1).
enum class QSign { NonPositive, AboveHardy };
double barrier_radius(const InfinityBarrier& b, const ProblemParams& params,
                      QSign sign, double r_lo, double r_hi, int per_decade = 200);

// ------------------------------------------------------------- tabulation

enum class BarrierKind { Origin, Exponential, Infinity };

// Origin uses (delta, eps); Exponential uses eps as the mass reduction;
// Infinity uses (gamma, delta).
struct BarrierDef {
  BarrierKind kind = BarrierKind::Infinity;
  double delta = 0.3;
  double eps = 0.0;
  double gamma = -1.0;
};

// residual = operator(value) - source * value^{p-1}, with the operator the
// one each barrier is built for; it vanishes up to rounding.
struct BarrierRow {
  double r = 0.0;
  double value = 0.0;
  double source = 0.0;
  double residual = 0.0;
};

std::vector<BarrierRow> barrier_table(const ProblemParams& params, const BarrierDef& def,
                                      std::span<const double> radii);

}  // namespace hardyq
