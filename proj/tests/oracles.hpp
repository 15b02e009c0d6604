#pragma once

// Reference computations that share no code with the library.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

inline double gamma_mu(double g, double N, double p, double mu) {
  return std::pow(g, p - 1) * ((p - 1) * g - (N - p)) + mu;
}

// Plain interval halving until the bracket is below 1e-12.
inline double bisect(const std::function<double(double)>& g, double a, double b) {
  double ga = g(a);
  while (b - a > 1e-12) {
    const double c = 0.5 * (a + b);
    const double gc = g(c);
    if ((gc > 0) == (ga > 0)) {
      a = c;
      ga = gc;
    } else {
      b = c;
    }
  }
  return 0.5 * (a + b);
}

// Coefficients of (sum a_k x^k)^q by the J.C.P. Miller recurrence.
inline std::vector<double> series_power(const std::vector<double>& a, double q) {
  std::vector<double> b(a.size(), 0.0);
  b[0] = std::pow(a[0], q);
  for (std::size_t n = 1; n < a.size(); ++n) {
    double s = 0.0;
    for (std::size_t k = 1; k <= n; ++k)
      s += ((q + 1.0) * double(k) - double(n)) * a[k] * b[n - k];
    b[n] = s / (double(n) * a[0]);
  }
  return b;
}

// Substitutes phi = sum c_i r^{-i} into
//   phi' = (p-1) phi^{p/(p-1)} - (N-1) phi / r - m
// and matches powers of 1/r one at a time.
inline std::vector<double> expansion_coeffs(double N, double p, double m, int k) {
  const double q = p / (p - 1);
  std::vector<double> c{std::pow(m / (p - 1), (p - 1) / p)};
  for (int i = 1; i <= k; ++i) {
    std::vector<double> trial = c;
    trial.push_back(0.0);
    const double partial = series_power(trial, q)[i];
    const double lead = q * std::pow(c[0], q - 1);
    c.push_back(((N - i) * c[i - 1] / (p - 1) - partial) / lead);
  }
  return c;
}

// Fourth-order centered first and second derivatives in long double.
struct Jet {
  long double u, du, d2u;
};

inline Jet fd_jet(const std::function<long double(long double)>& u, long double r,
                  long double h) {
  const long double m2 = u(r - 2 * h), m1 = u(r - h), z = u(r), p1 = u(r + h),
                    p2 = u(r + 2 * h);
  Jet j;
  j.u = z;
  j.du = (m2 - 8 * m1 + 8 * p1 - p2) / (12 * h);
  j.d2u = (-m2 + 16 * m1 - 30 * z + 16 * p1 - p2) / (12 * h * h);
  return j;
}

// (-Δ_p u + mass u^{p-1} - hardy μ r^{-p} u^{p-1}) / u^{p-1} for u > 0 via
// finite differences.
inline double fd_operator_ratio(const std::function<long double(long double)>& u,
                                double r, double N, double p, double mass, double mu,
                                double rel_step = 1e-3) {
  // The step follows the smaller of the algebraic and exponential scales.
  const Jet j = fd_jet(u, r, rel_step * std::min(r, 1.0));
  const long double a = std::pow(std::fabs(j.du), (long double)(p - 2));
  const long double lap = (p - 1) * a * j.d2u + (N - 1) / r * a * j.du;
  const long double up = std::pow(j.u, (long double)(p - 1));
  return double((-lap) / up + mass - mu * std::pow((long double)r, -(long double)p));
}

}  // namespace oracle
