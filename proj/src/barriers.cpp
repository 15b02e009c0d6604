#include "hardyq/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hardyq/error.hpp"
#include "hardyq/exponents.hpp"

namespace hardyq {

namespace {

// |x|^{p-2} x, zero at x = 0 for every p > 1.
double signed_pow(double x, double p) {
  if (x == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(x), p - 1.0), x);
}

}  // namespace

double residual_radial(const RadialJet& jet, double r, const ProblemParams& q,
                       const ResidualTerms& terms) {
  const double ad = std::abs(jet.du);
  // |u'|^{p-2}u'' is singular at u' = 0 for p < 2; the limit is only finite
  // when u'' vanishes too, so keep the product 0 there.
  const double flux_coef = ad == 0.0 ? 0.0 : std::pow(ad, q.p - 2.0);
  double res = -(q.p - 1.0) * flux_coef * jet.d2u - (q.N - 1.0) / r * signed_pow(jet.du, q.p);
  const double up = signed_pow(jet.u, q.p);
  if (terms.hardy) res -= q.mu * std::pow(r, -q.p) * up;
  res += terms.mass * up;
  if (terms.f) res -= (*terms.f)(jet.u);
  return res;
}

double residual_radial(std::span<const double> r, std::span<const double> u, std::size_t i,
                       const ProblemParams& q, const ResidualTerms& terms) {
  if (r.size() != u.size()) throw Error(ErrorCode::GridMismatch, "r and u sizes differ");
  if (i == 0 || i + 1 >= r.size())
    throw Error(ErrorCode::InsufficientStencil, "centered stencil needs both neighbours");
  const double h1 = r[i] - r[i - 1], h2 = r[i + 1] - r[i];
  if (!(h1 > 0.0 && h2 > 0.0)) throw Error(ErrorCode::GridMismatch, "grid not increasing");
  RadialJet jet;
  jet.u = u[i];
  jet.du = -h2 / (h1 * (h1 + h2)) * u[i - 1] + (h2 - h1) / (h1 * h2) * u[i] +
           h1 / (h2 * (h1 + h2)) * u[i + 1];
  jet.d2u = 2.0 * (u[i - 1] / (h1 * (h1 + h2)) - u[i] / (h1 * h2) +
                   u[i + 1] / (h2 * (h1 + h2)));
  return residual_radial(jet, r[i], q, terms);
}

double k_func(double t, const ProblemParams& q) {
  return (q.p - 1.0) * t * t - (q.N - q.p) * t;
}

double h_func(double t, const ProblemParams& q, double g1, double eps) {
  // With γ1^{p-2} k(γ1) = -μ the two O(1) parts cancel near t = 0; writing
  // their difference through log1p/expm1 keeps h accurate for tiny |t|.
  const double a = (eps - g1) / g1;
  if (g1 > 0.0 && t < 1.0 && 1.0 + a * t > 0.0) {
    const double la = (q.p - 2.0) * std::log1p(a * t);
    const double lb = (q.p - 1.0) * std::log1p(-t);
    const double base_pow = std::pow(g1, q.p - 2.0) * std::exp(la);
    return base_pow * k_func(g1 - eps, q) * t + q.mu * std::exp(lb) * std::expm1(la - lb);
  }
  const double base = std::abs(g1 - (g1 - eps) * t);
  const double first = std::pow(base, q.p - 2.0) * (k_func(g1 - eps, q) * t - k_func(g1, q));
  const double one_minus = 1.0 - t;
  const double second = q.mu * signed_pow(one_minus, q.p);
  return first - second;
}

double h_func(double t, const ProblemParams& q, double eps) {
  return h_func(t, q, solve_exponents(q).gamma1, eps);
}

double h_prime_at_zero(const ProblemParams& q, double g1, double eps) {
  return (q.p - 1.0) * std::pow(g1, q.p - 2.0) * (-q.p * g1 + q.N - q.p + eps) * eps;
}

OriginBarrier make_origin_barrier(const ProblemParams& q, double delta, double eps) {
  validate(q);
  if (!(q.mu > 0.0))
    throw Error(ErrorCode::InvalidParams, "the origin barrier needs mu > 0");
  if (!(delta > 0.0 && delta < 1.0))
    throw Error(ErrorCode::InvalidParams, "origin barrier delta must lie in (0, 1)");
  if (!(eps > 0.0 && eps < q.p))
    throw Error(ErrorCode::InvalidParams, "origin barrier eps must lie in (0, p)");
  return {delta, eps, solve_exponents(q).gamma1};
}

RadialJet origin_barrier_jet(const OriginBarrier& b, double r) {
  const double g = b.gamma1, e = b.eps, d = b.delta;
  RadialJet j;
  j.u = std::pow(r, -g) * (1.0 + d * std::pow(r, e));
  j.du = -g * std::pow(r, -g - 1.0) + d * (e - g) * std::pow(r, e - g - 1.0);
  j.d2u = g * (g + 1.0) * std::pow(r, -g - 2.0) +
          d * (e - g) * (e - g - 1.0) * std::pow(r, e - g - 2.0);
  return j;
}

double origin_source(const OriginBarrier& b, double r, const ProblemParams& q) {
  const double s = b.delta * std::pow(r, b.eps);
  return h_func(-s, q, b.gamma1, b.eps) / (std::pow(1.0 + s, q.p - 1.0) * std::pow(r, q.p));
}

std::vector<double> default_t_grid() {
  std::vector<double> t;
  t.reserve(480);
  for (int j = 1; j <= 480; ++j) t.push_back(-std::exp2(-j / 8.0));
  return t;
}

OriginParamChoice choose_origin_params(const ProblemParams& q, std::span<const double> t_grid,
                                       std::optional<double> eps) {
  validate(q);
  if (!(q.mu > 0.0))
    throw Error(ErrorCode::InvalidParams, "origin parameter selection needs mu > 0");
  OriginParamChoice out;
  out.eps = eps.value_or(q.p / 2.0);
  if (!(out.eps > 0.0 && out.eps < q.p))
    throw Error(ErrorCode::InvalidParams, "eps must lie in (0, p)");

  std::vector<double> ts;
  if (t_grid.empty()) {
    ts = default_t_grid();
  } else {
    ts.assign(t_grid.begin(), t_grid.end());
  }
  for (double t : ts)
    if (!(t > -1.0 && t < 0.0))
      throw Error(ErrorCode::InvalidParams, "t samples must lie in (-1, 0)");
  std::sort(ts.begin(), ts.end(), [](double a, double b) { return a > b; });

  const double g1 = solve_exponents(q).gamma1;
  const double hp = h_prime_at_zero(q, g1, out.eps);
  out.h_prime0 = hp;
  for (double t : ts) {
    const double h = h_func(t, q, g1, out.eps);
    if (!(2.0 * hp * t <= h && h <= 0.5 * hp * t)) break;
    out.delta_h = -t;
  }
  if (!(out.delta_h > 0.0))
    throw Error(ErrorCode::NoValidDelta, "two-sided bound on h fails at every sampled t");

  const OriginBarrier b{out.delta_h, out.eps, g1};
  // Radii 10^{-j/200} from 1e-12 up to just below 1.
  constexpr int kPerDecade = 200, kDecades = 12;
  for (int j = kPerDecade * kDecades; j >= 1; --j) {
    const double r = std::pow(10.0, -static_cast<double>(j) / kPerDecade);
    if (!(origin_source(b, r, q) <= -q.m)) break;
    out.r2 = r;
  }
  return out;
}

double exp_profile_rate(const ProblemParams& q, double eps_mass) {
  const double reduced = q.m - eps_mass;
  if (!(reduced > 0.0)) throw Error(ErrorCode::InvalidParams, "require m - eps > 0");
  return std::pow(reduced / (q.p - 1.0), 1.0 / q.p);
}

ExpProfile exponential_profile(double r, double alpha, const ProblemParams& q) {
  if (!(r > 0.0 && alpha > 0.0))
    throw Error(ErrorCode::InvalidParams, "require r > 0 and alpha > 0");
  return {std::exp(-alpha * r), (q.N - 1.0) * std::pow(alpha, q.p - 1.0) / r};
}

InfinityBarrier make_infinity_barrier(const ProblemParams& q, double gamma, double delta) {
  validate_with_positive_mass(q);
  if (!(delta > 0.0 && delta < 0.5))
    throw Error(ErrorCode::InvalidParams, "infinity barrier delta must lie in (0, 1/2)");
  if (!std::isfinite(gamma)) throw Error(ErrorCode::InvalidParams, "gamma must be finite");
  return {gamma, delta, decay_power(q), decay_rate(q)};
}

double infinity_barrier_value(const InfinityBarrier& b, double r) {
  return std::pow(r, -b.alpha_decay) * std::exp(-b.beta * r) *
         (1.0 - b.gamma * std::pow(r, -b.delta));
}

AValue A_func(const InfinityBarrier& b, double r) {
  const double d = b.delta, g = b.gamma;
  const double D = 1.0 - g * std::pow(r, -d);
  if (!(D > 0.0)) {
    std::ostringstream os;
    os << "1 - gamma r^-delta <= 0 at r=" << r;
    throw Error(ErrorCode::Pole, os.str());
  }
  AValue out;
  out.A = b.beta + b.alpha_decay / r - d * g * std::pow(r, -d - 1.0) / D;
  const double num = -(d + 1.0) * std::pow(r, -d - 2.0) * D - g * d * std::pow(r, -2.0 * d - 2.0);
  out.dA = -b.alpha_decay / (r * r) - d * g * num / (D * D);
  return out;
}

RadialJet infinity_barrier_jet(const InfinityBarrier& b, double r) {
  const AValue a = A_func(b, r);
  RadialJet j;
  j.u = infinity_barrier_value(b, r);
  j.du = -a.A * j.u;
  j.d2u = (a.A * a.A - a.dA) * j.u;
  return j;
}

double Q_func(const InfinityBarrier& b, double r, const ProblemParams& q) {
  const AValue a = A_func(b, r);
  const double p = q.p;
  return q.m + (p - 1.0) * std::pow(a.A, p - 2.0) * a.dA - (p - 1.0) * std::pow(a.A, p) +
         (q.N - 1.0) * std::pow(a.A, p - 1.0) / r;
}

double Q_leading(const InfinityBarrier& b, const ProblemParams& q) {
  const double phi_inf = std::pow(q.m / (q.p - 1.0), (q.p - 1.0) / q.p);
  return phi_inf * q.p * (q.p - 1.0) * b.delta * b.gamma;
}

double barrier_radius(const InfinityBarrier& b, const ProblemParams& q, QSign sign,
                      double r_lo, double r_hi, int per_decade) {
  if (!(r_lo > 0.0 && r_hi > r_lo && per_decade > 0))
    throw Error(ErrorCode::InvalidParams, "require 0 < r_lo < r_hi and per_decade > 0");
  const auto holds = [&](double r) {
    if (!(1.0 - b.gamma * std::pow(r, -b.delta) > 0.0)) return false;
    const double Q = Q_func(b, r, q);
    return sign == QSign::NonPositive ? Q <= 0.0 : Q >= 2.0 * q.mu * std::pow(r, -q.p);
  };
  const double span = std::log10(r_hi / r_lo);
  const int n = std::max(1, static_cast<int>(std::ceil(span * per_decade)));
  double R = 0.0;
  for (int j = n; j >= 0; --j) {
    const double r = j == n ? r_hi : r_lo * std::pow(10.0, span * j / n);
    if (!holds(r)) break;
    R = r;
  }
  if (!(R > 0.0))
    throw Error(ErrorCode::DomainError, "barrier sign condition fails at r_hi");
  return R;
}

}  // namespace hardyq

namespace hardyq {

std::vector<BarrierRow> barrier_table(const ProblemParams& q, const BarrierDef& def,
                                      std::span<const double> radii) {
  std::vector<BarrierRow> rows;
  rows.reserve(radii.size());
  const auto finish = [&](double r, const RadialJet& jet, double source,
                          const ResidualTerms& terms) {
    const double op = residual_radial(jet, r, q, terms);
    rows.push_back({r, jet.u, source, op - source * std::pow(jet.u, q.p - 1.0)});
  };
  for (double r : radii)
    if (!(r > 0.0)) throw Error(ErrorCode::InvalidParams, "radii must be positive");
  switch (def.kind) {
    case BarrierKind::Origin: {
      const OriginBarrier b = make_origin_barrier(q, def.delta, def.eps);
      for (double r : radii)
        finish(r, origin_barrier_jet(b, r), origin_source(b, r, q), {0.0, true, nullptr});
      break;
    }
    case BarrierKind::Exponential: {
      validate_with_positive_mass(q);
      const double alpha = exp_profile_rate(q, def.eps);
      for (double r : radii) {
        const ExpProfile e = exponential_profile(r, alpha, q);
        const RadialJet jet{e.value, -alpha * e.value, alpha * alpha * e.value};
        finish(r, jet, e.source, {q.m - def.eps, false, nullptr});
      }
      break;
    }
    case BarrierKind::Infinity: {
      const InfinityBarrier b = make_infinity_barrier(q, def.gamma, def.delta);
      for (double r : radii)
        finish(r, infinity_barrier_jet(b, r), Q_func(b, r, q), {q.m, false, nullptr});
      break;
    }
  }
  return rows;
}

}  // namespace hardyq
