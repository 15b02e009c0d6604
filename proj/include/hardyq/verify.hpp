#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hardyq/expansion.hpp"
#include "hardyq/exponents.hpp"
#include "hardyq/radial_ode.hpp"

namespace hardyq {

struct Window {
  double lo = 0.0;
  double hi = 0.0;
};

inline constexpr int kProbesPerDecade = 20;
inline constexpr double kLimitThreshold = 1e-2;
inline constexpr double kFitTolerance = 0.15;

// Log-spaced radii covering [lo, hi], both ends included.
std::vector<double> log_probes(const Window& w, int per_decade = kProbesPerDecade);

enum class LimitTarget { Origin, Infinity };

struct LimitReport {
  LimitTarget target = LimitTarget::Origin;
  double C_estimate = 0.0;
  double cauchy_variation = 0.0;
  Window window;
  double threshold = kLimitThreshold;
  bool passed = false;
};

// u r^{γ1} on the probes; C is the value at the smallest radius.
LimitReport origin_limit(const RadialSolution& sol, double gamma1, const Window& w,
                         double threshold = kLimitThreshold);

// u r^{(N-1)/(p(p-1))} e^{(m/(p-1))^{1/p} r}; C is the value at the largest
// radius.
LimitReport infinity_limit(const RadialSolution& sol, const Window& w,
                           double threshold = kLimitThreshold);

enum class RateQuantity { WMinusLimit, Phi1 };

// fitted_exponent is oriented so that the claim always reads
// fitted_exponent >= claimed_bound: the growth exponent of w - γ1^{p-1}
// as r -> 0, or the decay exponent of a quantity as r -> infinity.
struct RateReport {
  double fitted_exponent = 0.0;
  double fit_residual = 0.0;
  double claimed_bound = 0.0;
  double tolerance = kFitTolerance;
  bool passed = false;
  // Phi1: intercept of (phi - phi_inf) r against 1/r, and the target c1.
  double coefficient = 0.0;
  double coefficient_target = 0.0;
  // expansion_check: largest mismatch over the window.
  double sup_mismatch = 0.0;
};

// δ0 = p - (p*-p)(γ1 + ε0) with ε0 = ((N-p)/p - γ1)/2.
double origin_rate_delta0(const ProblemParams& params, double gamma1);

RateReport rate_fit(const RadialSolution& sol, RateQuantity quantity, const Window& w,
                    double tolerance = kFitTolerance);

// Mismatch e(r) = |phi(r) - eval_series(r)| (phi equals (-u'/u)^{p-1} on
// the decreasing branch), clamped below at the integration tolerance.
RateReport expansion_check(const RadialSolution& sol, const ExpansionSeries& series,
                           const Window& w, double tolerance = kFitTolerance,
                           bool include_hardy = true);

struct BoundsReport {
  double origin_upper = 0.0;    // c1: u <= c1 r^{-γ1}
  double origin_lower = 0.0;    // u >= origin_lower r^{-γ1}
  double origin_c2 = 0.0;       // origin_lower / inf u over the window
  double infinity_upper = 0.0;  // C1
  double infinity_lower = 0.0;
  double infinity_C2 = 0.0;     // infinity_lower / u(R2)
  double growth_exponent = 0.0; // -slope of log u vs log r near 0
  double tau = 0.0;             // (N-p)/p - growth_exponent
  bool passed = false;
};

BoundsReport bounds_check(const RadialSolution& origin, const RadialSolution& infinity,
                          const Exponents& exps, const Window& origin_window,
                          const Window& infinity_window);

// True iff v <= u + tol at every grid point inside the annulus. Requires
// v <= u + tol at both boundary nodes.
bool comparison_check(std::span<const double> r, std::span<const double> u,
                      std::span<const double> v, const Window& annulus,
                      double tol = 1e-12);

// u(R2) v_{-1}(r)/v_{-1}(R2) sampled on r.
std::vector<double> scaled_subsolution(std::span<const double> r, double u_at_R2,
                                       double R2, double delta,
                                       const ProblemParams& params);

using RadialFn = std::function<double(double)>;

// ∫|φ'|^p r^{N-1} dr / ∫|φ|^p r^{N-1-p} dr by composite 8-point
// Gauss-Legendre in log r: `panels` panels between consecutive breakpoints.
// A zero left end is replaced by 1e-100 * right end.
double hardy_ratio(const ProblemParams& params, const RadialFn& phi,
                   const RadialFn& dphi, std::vector<double> breakpoints,
                   int panels = 64);

// ------------------------------------------------------------ reporting

struct ComparisonReport {
  double R2 = 0.0;  // smallest sampled radius with Q <= 0 beyond it (gamma = -1)
  Window annulus;
  double min_gap = 0.0;  // min over the annulus of u - scaled v_{-1}
  bool passed = false;
};

// Scaled v_{-1} against the far-field solution on [R2, hi]. R2 is snapped
// to the first grid node at or beyond the barrier radius so that the two
// agree exactly on the inner boundary.
ComparisonReport barrier_comparison(const RadialSolution& infinity, double hi,
                                    double delta = 0.3);

struct VerifyConfig {
  Window origin_window{1e-5, 1e-3};
  Window infinity_window{10.0, 20.0};
  std::optional<int> expansion_order;
  double comparison_delta = 0.3;
  double threshold = kLimitThreshold;
  double fit_tolerance = kFitTolerance;
};

struct VerifyBundle {
  std::string json;
  bool all_passed = false;
};

// Every check that applies to the given solutions; `infinity` may be null.
VerifyBundle verify_bundle(const RadialSolution& origin, const RadialSolution* infinity,
                           const VerifyConfig& config);


std::string to_json(const LimitReport& r);
std::string to_json(const RateReport& r);
std::string to_json(const BoundsReport& r);
std::string to_json(const ComparisonReport& r);

}  // namespace hardyq
