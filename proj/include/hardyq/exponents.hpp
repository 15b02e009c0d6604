#pragma once

#include "hardyq/params.hpp"

namespace hardyq {

inline constexpr double kDefaultExponentTol = 1e-12;

struct Exponents {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double mu_bar = 0.0;
};

/// Best Hardy constant ((N-p)/p)^p. Only needs 1 < p < N.
double mu_bar(const ProblemParams& params);

/// Γ_μ(γ) = γ^{p-1}[(p-1)γ - (N-p)] + μ for γ >= 0.
double gamma_mu(double gamma, const ProblemParams& params);

/// The two nonnegative roots γ1 < (N-p)/p < γ2 of Γ_μ.
///
/// Bisection on the sign brackets [0, (N-p)/p] and [(N-p)/p, (N-p)/(p-1)],
/// polished by safeguarded Newton steps. For μ = 0 the exact pair
/// (0, (N-p)/(p-1)) is returned without iterating.
Exponents solve_exponents(const ProblemParams& params,
                          double tol = kDefaultExponentTol);

}  // namespace hardyq
