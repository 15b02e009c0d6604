#pragma once

#include <vector>

#include "hardyq/params.hpp"

namespace hardyq {

struct PowerTerm {
  double coefficient = 1.0;
  double exponent = 4.0;

  friend bool operator==(const PowerTerm&, const PowerTerm&) = default;
};

// f(u) = sum_j a_j |u|^{e_j - 2} u. An empty term list is f == 0.
class Nonlinearity {
 public:
  Nonlinearity() = default;
  explicit Nonlinearity(std::vector<PowerTerm> terms);

  static Nonlinearity power(double exponent, double coefficient = 1.0) {
    return Nonlinearity({PowerTerm{coefficient, exponent}});
  }

  double operator()(double u) const;

  // f(u)/u^{p-1} for u = exp(logu) > 0, evaluated in log space so that
  // tiny or huge u does not under/overflow the intermediate powers.
  double ratio_from_log(double logu, double p) const;

  const std::vector<PowerTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  // Smallest exponent (q in the growth condition at 0); p* for f == 0.
  double growth_exponent(const ProblemParams& params) const;
  // sum |a_j|, which bounds both limsup conditions.
  double growth_constant() const;

  // Every exponent in (p, p*], and f(u)/u^{p-1} small at u = 1e-8.
  void validate(const ProblemParams& params) const;

  friend bool operator==(const Nonlinearity&, const Nonlinearity&) = default;

 private:
  std::vector<PowerTerm> terms_;
};

}  // namespace hardyq
