#include "hardyq/expansion.hpp"

#include <cmath>

#include "hardyq/error.hpp"

namespace hardyq {

int default_order(double p) { return static_cast<int>(std::floor(p)); }

double f_taylor_deriv(int n, double c0, double p) {
  const double e = p / (p - 1.0);
  double falling = 1.0;
  for (int j = 0; j < n; ++j) falling *= e - j;
  return (p - 1.0) * falling * std::pow(c0, e - n);
}

ExpansionSeries build_series(const ProblemParams& params, std::optional<int> k) {
  validate_with_positive_mass(params);
  const double N = params.N, p = params.p, m = params.m;
  ExpansionSeries s;
  s.params = params;
  const int kd = default_order(p);
  s.k = k.value_or(kd);
  if (s.k < 0) throw Error(ErrorCode::InvalidParams, "expansion order must be >= 0");
  s.extrapolated = s.k > kd;
  s.phi_inf = std::pow(m / (p - 1.0), (p - 1.0) / p);
  s.alpha0 = p * std::pow(s.phi_inf, 1.0 / (p - 1.0));
  s.hardy_coeff = -params.mu / s.alpha0;

  const int k_order = s.k;
  s.c.assign(k_order + 1, 0.0);
  s.c[0] = s.phi_inf;
  if (k_order >= 1) s.c[1] = (N - 1.0) / p * std::pow(m / (p - 1.0), (p - 2.0) / p);

  // powers[n][i] = [x^i] S(x)^n with S(x) = sum_{j>=1} c_j x^j. Column i of
  // powers[n>=2] only involves c_1..c_{i-1}, so the table grows one column
  // per solved coefficient.
  std::vector<std::vector<double>> powers(k_order + 1,
                                          std::vector<double>(k_order + 1, 0.0));
  powers[0][0] = 1.0;
  auto fill_column = [&](int i) {
    for (int n = 1; n <= i; ++n) {
      double acc = 0.0;
      for (int j = 1; j <= i - (n - 1); ++j) acc += s.c[j] * powers[n - 1][i - j];
      powers[n][i] = acc;
    }
  };
  if (k_order >= 1) fill_column(1);

  std::vector<double> taylor(k_order + 1, 0.0);
  double factorial = 1.0;
  for (int n = 0; n <= k_order; ++n) {
    if (n > 0) factorial *= n;
    taylor[n] = f_taylor_deriv(n, s.c[0], p) / factorial;
  }

  for (int i = 2; i <= k_order; ++i) {
    fill_column(i);  // powers[1][i] uses c_i = 0 here; only n >= 2 is read
    double rhs = 0.0;
    for (int n = 2; n <= i; ++n) rhs += taylor[n] * powers[n][i];
    s.c[i] = ((N - i) * s.c[i - 1] - rhs) / s.alpha0;
    powers[1][i] = s.c[i];
  }
  return s;
}

double eval_series(const ExpansionSeries& s, double r) {
  if (!(r > 0.0)) throw Error(ErrorCode::DomainError, "eval_series requires r > 0");
  double acc = 0.0;
  const double x = 1.0 / r;
  for (int i = s.k; i >= 0; --i) acc = acc * x + s.c[i];
  return acc + s.hardy_coeff * std::pow(r, -s.params.p);
}

double log_derivative_prediction(const ExpansionSeries& s, double r) {
  const double v = eval_series(s, r);
  if (!(v > 0.0))
    throw Error(ErrorCode::DomainError, "series is not positive at this radius");
  return -std::pow(v, 1.0 / (s.params.p - 1.0));
}

}  // namespace hardyq
