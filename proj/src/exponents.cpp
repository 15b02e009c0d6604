#include "hardyq/exponents.hpp"

#include <cmath>

#include "hardyq/error.hpp"

namespace hardyq {

double mu_bar(const ProblemParams& q) {
  if (!(q.p > 1.0 && q.p < q.N))
    throw Error(ErrorCode::InvalidParams, "mu_bar requires 1 < p < N");
  return std::pow((q.N - q.p) / q.p, q.p);
}

double gamma_mu(double gamma, const ProblemParams& q) {
  if (!(gamma >= 0.0)) throw Error(ErrorCode::InvalidParams, "gamma_mu requires gamma >= 0");
  return std::pow(gamma, q.p - 1.0) * ((q.p - 1.0) * gamma - (q.N - q.p)) + q.mu;
}

namespace {

double gamma_mu_slope(double g, const ProblemParams& q) {
  return (q.p - 1.0) * std::pow(g, q.p - 2.0) * (q.p * g - (q.N - q.p));
}

// Root of Γ_μ in [lo, hi] given sign(Γ(lo)) = s_lo != sign(Γ(hi)).
double bracketed_root(double lo, double hi, const ProblemParams& q, double tol) {
  double f_lo = gamma_mu(lo, q);
  if (f_lo == 0.0) return lo;
  if (gamma_mu(hi, q) == 0.0) return hi;

  // Near γ = 0 the slope of Γ_μ blows up for p < 2, so a narrow bracket
  // does not imply a small residual; both are required.
  int it = 0;
  double f_mid = 1.0;
  for (; it < 1200 && (hi - lo > tol || std::abs(f_mid) > tol); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    f_mid = gamma_mu(mid, q);
    if (f_mid == 0.0) return mid;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  if (it == 1200)
    throw Error(ErrorCode::NoConvergence, "exponent bisection budget exhausted");

  // Newton polish, kept only while it stays inside the bracket and
  // reduces the residual.
  double x = 0.5 * (lo + hi);
  double fx = gamma_mu(x, q);
  for (int i = 0; i < 8 && fx != 0.0; ++i) {
    const double d = gamma_mu_slope(x, q);
    if (!(std::isfinite(d)) || d == 0.0) break;
    const double next = x - fx / d;
    if (!(next >= lo && next <= hi)) break;
    const double f_next = gamma_mu(next, q);
    if (!(std::abs(f_next) < std::abs(fx))) break;
    x = next;
    fx = f_next;
  }
  return x;
}

}  // namespace

Exponents solve_exponents(const ProblemParams& q, double tol) {
  validate(q);
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidParams, "tol must be positive");
  Exponents e;
  e.mu_bar = mu_bar(q);
  const double mid = (q.N - q.p) / q.p;
  const double top = (q.N - q.p) / (q.p - 1.0);
  if (q.mu == 0.0) {
    e.gamma1 = 0.0;
    e.gamma2 = top;
    return e;
  }
  e.gamma1 = bracketed_root(0.0, mid, q, tol);
  e.gamma2 = bracketed_root(mid, top, q, tol);
  return e;
}

}  // namespace hardyq
