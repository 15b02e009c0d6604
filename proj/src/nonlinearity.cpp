#include "hardyq/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hardyq/error.hpp"

namespace hardyq {

Nonlinearity::Nonlinearity(std::vector<PowerTerm> terms) : terms_(std::move(terms)) {}

double Nonlinearity::operator()(double u) const {
  double acc = 0.0;
  const double au = std::abs(u);
  for (const auto& t : terms_) acc += t.coefficient * std::pow(au, t.exponent - 2.0) * u;
  return acc;
}

double Nonlinearity::ratio_from_log(double logu, double p) const {
  double acc = 0.0;
  for (const auto& t : terms_) acc += t.coefficient * std::exp((t.exponent - p) * logu);
  return acc;
}

double Nonlinearity::growth_exponent(const ProblemParams& params) const {
  if (terms_.empty()) return sobolev_exponent(params);
  double q = terms_.front().exponent;
  for (const auto& t : terms_) q = std::min(q, t.exponent);
  return q;
}

double Nonlinearity::growth_constant() const {
  double a = 0.0;
  for (const auto& t : terms_) a += std::abs(t.coefficient);
  return a;
}

void Nonlinearity::validate(const ProblemParams& params) const {
  const double p_star = sobolev_exponent(params);
  for (const auto& t : terms_) {
    if (!std::isfinite(t.coefficient) || !std::isfinite(t.exponent))
      throw Error(ErrorCode::InvalidParams, "nonlinearity terms must be finite");
    // Allow p* itself up to rounding of Np/(N-p).
    if (!(t.exponent > params.p && t.exponent <= p_star * (1.0 + 1e-14))) {
      std::ostringstream os;
      os << "nonlinearity exponent " << t.exponent << " outside (p, p*] = (" << params.p
         << ", " << p_star << "]";
      throw Error(ErrorCode::InvalidParams, os.str());
    }
  }
  // Each exponent exceeds p, so the ratio must shrink between these two
  // probes unless cancellation makes it vanish outright.
  const auto ratio = [&](double u) {
    return std::abs((*this)(u)) / std::pow(u, params.p - 1.0);
  };
  if (!(ratio(1e-8) <= ratio(1e-4) * (1.0 + 1e-12) || ratio(1e-8) < 1e-12))
    throw Error(ErrorCode::InvalidParams, "f(u)/u^{p-1} does not vanish as u -> 0");
}

}  // namespace hardyq
