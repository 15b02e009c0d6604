#pragma once

#include <optional>
#include <vector>

#include "hardyq/params.hpp"

namespace hardyq {

// Large-r expansion of (-u'/u)^{p-1}:
//
//   sum_{i=0}^{k} c_i r^{-i} + hardy_coeff * r^{-p} + O(r^{-(k+1)})
//
// The Hardy term is kept separate from the integer powers even when p is an
// integer; eval_series simply adds both.
struct ExpansionSeries {
  ProblemParams params;
  int k = 0;
  std::vector<double> c;  // c_0 .. c_k
  double hardy_coeff = 0.0;
  double alpha0 = 0.0;
  double phi_inf = 0.0;
  // Set when k exceeds the order with k <= p < k+1; the Hardy placement is
  // only established up to that order.
  bool extrapolated = false;
};

// The integer k with k <= p < k+1.
int default_order(double p);

// n-th derivative at t = 0 of F(t) = (p-1)(c0 + t)^{p/(p-1)}.
double f_taylor_deriv(int n, double c0, double p);

ExpansionSeries build_series(const ProblemParams& params,
                             std::optional<int> k = std::nullopt);

double eval_series(const ExpansionSeries& s, double r);

// Predicted u'/u = -(eval_series)^{1/(p-1)}; DomainError if the series is
// not positive at r.
double log_derivative_prediction(const ExpansionSeries& s, double r);

}  // namespace hardyq
