#include "hardyq/params.hpp"

#include <cmath>
#include <sstream>

#include "hardyq/error.hpp"

namespace hardyq {

namespace {

[[noreturn]] void reject(const std::string& msg) {
  throw Error(ErrorCode::InvalidParams, msg);
}

}  // namespace

void validate(const ProblemParams& q) {
  if (!std::isfinite(q.N) || !std::isfinite(q.p) || !std::isfinite(q.mu) ||
      !std::isfinite(q.m))
    reject("parameters must be finite");
  if (!(q.p > 1.0 && q.p < q.N)) {
    std::ostringstream os;
    os << "require 1 < p < N (got N=" << q.N << ", p=" << q.p << ")";
    reject(os.str());
  }
  const double mu_bar = std::pow((q.N - q.p) / q.p, q.p);
  if (!(q.mu >= 0.0 && q.mu < mu_bar)) {
    std::ostringstream os;
    os.precision(17);
    os << "require 0 <= mu < mu_bar = ((N-p)/p)^p = " << mu_bar << " (got mu=" << q.mu
       << ")";
    reject(os.str());
  }
}

void validate_with_positive_mass(const ProblemParams& q) {
  validate(q);
  if (!(q.m > 0.0)) reject("behaviour at infinity requires m > 0");
}

double sobolev_exponent(const ProblemParams& q) { return q.N * q.p / (q.N - q.p); }

double critical_exponent(const ProblemParams& q) { return (q.N - q.p) / q.p; }

double decay_power(const ProblemParams& q) { return (q.N - 1.0) / (q.p * (q.p - 1.0)); }

double decay_rate(const ProblemParams& q) { return std::pow(q.m / (q.p - 1.0), 1.0 / q.p); }

}  // namespace hardyq
