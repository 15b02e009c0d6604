#pragma once

namespace hardyq {

// Ambient data of  -Δ_p u - μ|x|^{-p}|u|^{p-2}u + m|u|^{p-2}u = f(u)  in R^N.
struct ProblemParams {
  double N = 3.0;
  double p = 2.0;
  double mu = 0.0;
  double m = 1.0;

  friend bool operator==(const ProblemParams&, const ProblemParams&) = default;
};

// Throws InvalidParams unless 1 < p < N and 0 <= mu < ((N-p)/p)^p.
void validate(const ProblemParams& params);

// Additionally rejects m <= 0; used by everything that looks at r -> infinity.
void validate_with_positive_mass(const ProblemParams& params);

// p* = Np/(N-p).
double sobolev_exponent(const ProblemParams& params);

// (N-p)/p, the Hardy-critical exponent separating gamma1 from gamma2.
double critical_exponent(const ProblemParams& params);

// Power and rate of the decay profile r^{-a} e^{-b r}:
//   a = (N-1)/(p(p-1)),  b = (m/(p-1))^{1/p}.
double decay_power(const ProblemParams& params);
double decay_rate(const ProblemParams& params);

}  // namespace hardyq
