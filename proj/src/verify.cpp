#include "hardyq/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "hardyq/barriers.hpp"
#include "hardyq/error.hpp"

namespace hardyq {

namespace {

using ojson = nlohmann::ordered_json;

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2) throw Error(ErrorCode::DegenerateFit, "need at least two samples to fit");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw Error(ErrorCode::DegenerateFit, "abscissae coincide");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    ss += e * e;
  }
  f.rms = std::sqrt(ss / n);
  return f;
}

void require_inside(const RadialSolution& sol, const Window& w) {
  if (!(w.lo > 0.0 && w.hi > w.lo))
    throw Error(ErrorCode::InvalidParams, "window needs 0 < lo < hi");
  if (sol.empty() || w.lo < sol.r.front() * (1.0 - 1e-12) ||
      w.hi > sol.r.back() * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "window [" << w.lo << ", " << w.hi << "] outside solution grid";
    if (!sol.empty()) os << " [" << sol.r.front() << ", " << sol.r.back() << "]";
    throw Error(ErrorCode::OutOfGrid, os.str());
  }
}

void require_chart(const RadialSolution& sol, Chart chart) {
  if (sol.chart != chart) {
    std::ostringstream os;
    os << "expected a " << to_string(chart) << " solution";
    throw Error(ErrorCode::InvalidParams, os.str());
  }
}

LimitReport compensated_limit(const RadialSolution& sol, const Window& w, double threshold,
                              LimitTarget target, double power, double rate) {
  require_inside(sol, w);
  const auto probes = log_probes(w);
  std::vector<double> vals;
  vals.reserve(probes.size());
  for (double r : probes)
    vals.push_back(std::exp(sample(sol, r).logu + power * std::log(r) + rate * r));
  LimitReport rep;
  rep.target = target;
  rep.window = w;
  rep.threshold = threshold;
  rep.C_estimate = target == LimitTarget::Origin ? vals.front() : vals.back();
  double spread = 0.0;
  for (double v : vals) spread = std::max(spread, std::abs(v - rep.C_estimate));
  rep.cauchy_variation = spread / std::abs(rep.C_estimate);
  rep.passed = std::isfinite(rep.C_estimate) && rep.C_estimate > 0.0 &&
               rep.cauchy_variation <= threshold;
  return rep;
}

ojson window_json(const Window& w) { return ojson::array({w.lo, w.hi}); }

}  // namespace

std::vector<double> log_probes(const Window& w, int per_decade) {
  if (!(w.lo > 0.0 && w.hi > w.lo))
    throw Error(ErrorCode::InvalidParams, "window needs 0 < lo < hi");
  if (per_decade < 1) throw Error(ErrorCode::InvalidParams, "per_decade must be >= 1");
  const double span = std::log10(w.hi / w.lo);
  const int n = std::max(2, static_cast<int>(std::ceil(span * per_decade)));
  std::vector<double> out(n + 1);
  for (int j = 0; j <= n; ++j) out[j] = w.lo * std::pow(10.0, span * j / n);
  out.front() = w.lo;
  out.back() = w.hi;
  return out;
}

LimitReport origin_limit(const RadialSolution& sol, double gamma1, const Window& w,
                         double threshold) {
  require_chart(sol, Chart::OriginW);
  return compensated_limit(sol, w, threshold, LimitTarget::Origin, gamma1, 0.0);
}

LimitReport infinity_limit(const RadialSolution& sol, const Window& w, double threshold) {
  require_chart(sol, Chart::InfinityPhi);
  validate_with_positive_mass(sol.params);
  return compensated_limit(sol, w, threshold, LimitTarget::Infinity,
                           decay_power(sol.params), decay_rate(sol.params));
}

double origin_rate_delta0(const ProblemParams& q, double gamma1) {
  const double spread = sobolev_exponent(q) - q.p;
  double eps0 = 0.5 * (critical_exponent(q) - gamma1);
  double d0 = q.p - spread * (gamma1 + eps0);
  for (int i = 0; i < 200 && !(d0 > 0.0); ++i) {
    eps0 *= 0.5;
    d0 = q.p - spread * (gamma1 + eps0);
  }
  if (!(d0 > 0.0)) throw Error(ErrorCode::DomainError, "no eps0 makes delta0 positive");
  return d0;
}

RateReport rate_fit(const RadialSolution& sol, RateQuantity quantity, const Window& w,
                    double tolerance) {
  require_inside(sol, w);
  const ProblemParams& q = sol.params;
  const auto probes = log_probes(w);
  RateReport rep;
  rep.tolerance = tolerance;

  std::vector<double> x, y;
  double sign = 0.0;
  const auto push = [&](double r, double value) {
    if (value == 0.0 || !std::isfinite(value))
      throw Error(ErrorCode::DegenerateFit, "quantity vanishes on the window");
    const double s = value > 0.0 ? 1.0 : -1.0;
    if (sign != 0.0 && s != sign)
      throw Error(ErrorCode::DegenerateFit, "quantity changes sign on the window");
    sign = s;
    x.push_back(std::log(r));
    y.push_back(std::log(std::abs(value)));
  };

  if (quantity == RateQuantity::WMinusLimit) {
    require_chart(sol, Chart::OriginW);
    const double limit = std::pow(sol.gamma1, q.p - 1.0);
    for (double r : probes) push(r, sample(sol, r).v - limit);
    const LineFit fit = least_squares(x, y);
    rep.fitted_exponent = fit.slope;
    rep.fit_residual = fit.rms;
    rep.claimed_bound = 0.1 * origin_rate_delta0(q, sol.gamma1);
  } else {
    require_chart(sol, Chart::InfinityPhi);
    validate_with_positive_mass(q);
    const double phi_inf = std::pow(q.m / (q.p - 1.0), (q.p - 1.0) / q.p);
    const double alpha0 = q.p * std::pow(phi_inf, 1.0 / (q.p - 1.0));
    std::vector<double> inv, scaled;
    for (double r : probes) {
      const double d = sample(sol, r).v - phi_inf;
      push(r, d);
      inv.push_back(1.0 / r);
      scaled.push_back(d * r);
    }
    const LineFit fit = least_squares(x, y);
    rep.fitted_exponent = -fit.slope;
    rep.fit_residual = fit.rms;
    rep.claimed_bound = 1.0;
    // (phi - phi_inf) r = c1 + O(1/r): the intercept at 1/r = 0.
    rep.coefficient = least_squares(inv, scaled).intercept;
    rep.coefficient_target = (q.N - 1.0) * phi_inf / alpha0;
  }
  rep.passed = rep.fitted_exponent >= rep.claimed_bound - tolerance;
  return rep;
}

RateReport expansion_check(const RadialSolution& sol, const ExpansionSeries& series,
                           const Window& w, double tolerance, bool include_hardy) {
  require_chart(sol, Chart::InfinityPhi);
  if (!(series.params == sol.params))
    throw Error(ErrorCode::SeriesMismatch, "series built for different parameters");
  require_inside(sol, w);
  // On the decreasing branch (-u'/u)^{p-1} is exactly phi, so phi is
  // compared with the series directly. Mismatches below the integration
  // tolerance are not resolvable and are clamped to it.
  const double floor = sol.tol * std::max(1.0, series.phi_inf);
  RateReport rep;
  rep.tolerance = tolerance;
  rep.claimed_bound = series.k + 1.0;
  std::vector<double> x, y;
  for (double r : log_probes(w)) {
    const double phi = sample(sol, r).v;
    if (!(phi > 0.0))
      throw Error(ErrorCode::DomainError, "phi <= 0 inside the expansion window");
    double pred = eval_series(series, r);
    if (!include_hardy) pred -= series.hardy_coeff * std::pow(r, -series.params.p);
    const double e = std::abs(phi - pred);
    rep.sup_mismatch = std::max(rep.sup_mismatch, e);
    x.push_back(std::log(r));
    y.push_back(std::log(std::max(e, floor)));
  }
  const LineFit fit = least_squares(x, y);
  rep.fitted_exponent = -fit.slope;
  rep.fit_residual = fit.rms;
  rep.passed = rep.fitted_exponent >= rep.claimed_bound - tolerance;
  return rep;
}

BoundsReport bounds_check(const RadialSolution& origin, const RadialSolution& infinity,
                          const Exponents& exps, const Window& ow, const Window& iw) {
  require_chart(origin, Chart::OriginW);
  require_chart(infinity, Chart::InfinityPhi);
  require_inside(origin, ow);
  require_inside(infinity, iw);
  const ProblemParams& q = origin.params;
  validate_with_positive_mass(q);
  BoundsReport rep;

  std::vector<double> x, y;
  rep.origin_upper = 0.0;
  rep.origin_lower = std::numeric_limits<double>::infinity();
  for (double r : log_probes(ow)) {
    const double lu = sample(origin, r).logu;
    const double c = std::exp(lu + exps.gamma1 * std::log(r));
    rep.origin_upper = std::max(rep.origin_upper, c);
    rep.origin_lower = std::min(rep.origin_lower, c);
    x.push_back(std::log(r));
    y.push_back(lu);
  }
  // u is decreasing, so its infimum over the ball is attained on the boundary.
  rep.origin_c2 = rep.origin_lower / std::exp(sample(origin, ow.hi).logu);
  rep.growth_exponent = -least_squares(x, y).slope;
  rep.tau = critical_exponent(q) - rep.growth_exponent;

  const double a = decay_power(q), b = decay_rate(q);
  rep.infinity_upper = 0.0;
  rep.infinity_lower = std::numeric_limits<double>::infinity();
  for (double r : log_probes(iw)) {
    const double c = std::exp(sample(infinity, r).logu + a * std::log(r) + b * r);
    rep.infinity_upper = std::max(rep.infinity_upper, c);
    rep.infinity_lower = std::min(rep.infinity_lower, c);
  }
  rep.infinity_C2 = rep.infinity_lower / std::exp(sample(infinity, iw.lo).logu);

  const LimitReport ol = origin_limit(origin, exps.gamma1, ow);
  const LimitReport il = infinity_limit(infinity, iw);
  const auto finite_pos = [](double v) { return std::isfinite(v) && v > 0.0; };
  rep.passed = finite_pos(rep.origin_upper) && finite_pos(rep.origin_lower) &&
               finite_pos(rep.infinity_upper) && finite_pos(rep.infinity_lower) &&
               rep.origin_lower <= ol.C_estimate && ol.C_estimate <= rep.origin_upper &&
               rep.infinity_lower <= il.C_estimate && il.C_estimate <= rep.infinity_upper &&
               rep.tau > 0.0;
  return rep;
}

bool comparison_check(std::span<const double> r, std::span<const double> u,
                      std::span<const double> v, const Window& annulus, double tol) {
  if (r.size() != u.size() || r.size() != v.size())
    throw Error(ErrorCode::GridMismatch, "r, u and v must share one grid");
  std::size_t first = r.size(), last = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] >= annulus.lo && r[i] <= annulus.hi) {
      first = std::min(first, i);
      last = i;
    }
  }
  if (first == r.size()) throw Error(ErrorCode::GridMismatch, "no grid point inside annulus");
  if (!(v[first] <= u[first] + tol && v[last] <= u[last] + tol))
    throw Error(ErrorCode::InvalidParams, "v <= u must hold on the annulus boundary");
  for (std::size_t i = first; i <= last; ++i)
    if (!(v[i] <= u[i] + tol)) return false;
  return true;
}

std::vector<double> scaled_subsolution(std::span<const double> r, double u_at_R2, double R2,
                                       double delta, const ProblemParams& q) {
  const InfinityBarrier b = make_infinity_barrier(q, -1.0, delta);
  const double scale = u_at_R2 / infinity_barrier_value(b, R2);
  std::vector<double> out;
  out.reserve(r.size());
  for (double x : r) out.push_back(scale * infinity_barrier_value(b, x));
  return out;
}

namespace {

// |x|^p r^k formed in log space, so that a tiny profile far out does not
// meet an overflowing weight.
double weighted_power(double x, double p, double r, double k) {
  if (x == 0.0) return 0.0;
  return std::exp(p * std::log(std::abs(x)) + k * std::log(r));
}

}  // namespace

double hardy_ratio(const ProblemParams& q, const RadialFn& phi, const RadialFn& dphi,
                   std::vector<double> breakpoints, int panels) {
  validate(q);
  if (breakpoints.size() < 2 || panels < 1)
    throw Error(ErrorCode::InvalidParams, "need two breakpoints and at least one panel");
  std::sort(breakpoints.begin(), breakpoints.end());
  static constexpr std::array<double, 4> node = {0.1834346424956498, 0.5255324099163290,
                                                 0.7966664774136267, 0.9602898564975363};
  static constexpr std::array<double, 4> weight = {0.3626837833783620, 0.3137066458778873,
                                                   0.2223810344533745, 0.1012285362903763};
  double num = 0.0, den = 0.0;
  for (std::size_t s = 0; s + 1 < breakpoints.size(); ++s) {
    double a = breakpoints[s];
    const double b = breakpoints[s + 1];
    if (a < 0.0) throw Error(ErrorCode::InvalidParams, "breakpoints must be >= 0");
    if (a == 0.0) a = 1e-100 * b;
    if (!(b > a)) continue;
    const double la = std::log(a), h = (std::log(b) - la) / panels;
    for (int k = 0; k < panels; ++k) {
      const double mid = la + (k + 0.5) * h;
      for (std::size_t j = 0; j < node.size(); ++j) {
        for (double sgn : {-1.0, 1.0}) {
          const double r = std::exp(mid + sgn * 0.5 * h * node[j]);
          const double wgt = 0.5 * h * weight[j] * r;
          num += wgt * weighted_power(dphi(r), q.p, r, q.N - 1.0);
          den += wgt * weighted_power(phi(r), q.p, r, q.N - 1.0 - q.p);
        }
      }
    }
  }
  if (!(den > 0.0)) throw Error(ErrorCode::ZeroDenominator, "test function vanishes");
  return num / den;
}

ComparisonReport barrier_comparison(const RadialSolution& infinity, double hi, double delta) {
  require_chart(infinity, Chart::InfinityPhi);
  const ProblemParams& q = infinity.params;
  const InfinityBarrier b = make_infinity_barrier(q, -1.0, delta);
  if (!(hi > infinity.r.front() && hi <= infinity.r.back() * (1.0 + 1e-12)))
    throw Error(ErrorCode::OutOfGrid, "comparison radius outside solution grid");
  ComparisonReport rep;
  const double R = barrier_radius(b, q, QSign::NonPositive, infinity.r.front(), hi);
  std::vector<double> r, u;
  for (std::size_t i = 0; i < infinity.size(); ++i) {
    if (infinity.r[i] >= R && infinity.r[i] <= hi) {
      r.push_back(infinity.r[i]);
      u.push_back(std::exp(infinity.logu[i]));
    }
  }
  if (r.size() < 2) throw Error(ErrorCode::GridMismatch, "annulus holds fewer than two nodes");
  rep.R2 = r.front();
  rep.annulus = {r.front(), r.back()};
  const auto v = scaled_subsolution(r, u.front(), rep.R2, delta, q);
  rep.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < r.size(); ++i) rep.min_gap = std::min(rep.min_gap, u[i] - v[i]);
  const double tol = 1e-12 * u.front();
  rep.passed = v.back() <= u.back() + tol && comparison_check(r, u, v, rep.annulus, tol);
  return rep;
}

VerifyBundle verify_bundle(const RadialSolution& origin, const RadialSolution* infinity,
                           const VerifyConfig& cfg) {
  require_chart(origin, Chart::OriginW);
  const ProblemParams& q = origin.params;
  const Exponents exps = solve_exponents(q);
  VerifyBundle out;
  out.all_passed = true;
  ojson j;
  j["params"] = {{"N", q.N}, {"p", q.p}, {"mu", q.mu}, {"m", q.m}};
  j["exponents"] = {{"gamma1", exps.gamma1}, {"gamma2", exps.gamma2}, {"mu_bar", exps.mu_bar}};
  j["amplitude"] = origin.amplitude;
  ojson checks = ojson::object();
  const auto record = [&](const char* name, const std::string& report, bool passed) {
    checks[name] = ojson::parse(report);
    out.all_passed = out.all_passed && passed;
  };

  const LimitReport ol = origin_limit(origin, exps.gamma1, cfg.origin_window, cfg.threshold);
  record("origin_limit", to_json(ol), ol.passed);
  const RateReport wr =
      rate_fit(origin, RateQuantity::WMinusLimit, cfg.origin_window, cfg.fit_tolerance);
  record("w_minus_limit", to_json(wr), wr.passed);

  if (infinity) {
    const Window& iw = cfg.infinity_window;
    const LimitReport il = infinity_limit(*infinity, iw, cfg.threshold);
    record("infinity_limit", to_json(il), il.passed);
    const RateReport pr = rate_fit(*infinity, RateQuantity::Phi1, iw, cfg.fit_tolerance);
    record("phi1", to_json(pr), pr.passed);
    const ExpansionSeries series = build_series(q, cfg.expansion_order);
    const RateReport er = expansion_check(*infinity, series, iw, cfg.fit_tolerance);
    record("expansion", to_json(er), er.passed);
    const BoundsReport br = bounds_check(origin, *infinity, exps, cfg.origin_window, iw);
    record("bounds", to_json(br), br.passed);
    const ComparisonReport cr = barrier_comparison(*infinity, iw.hi, cfg.comparison_delta);
    record("comparison", to_json(cr), cr.passed);
  }
  j["checks"] = std::move(checks);
  j["all_passed"] = out.all_passed;
  out.json = j.dump(2);
  return out;
}

std::string to_json(const ComparisonReport& r) {
  ojson j;
  j["R2"] = r.R2;
  j["annulus"] = window_json(r.annulus);
  j["min_gap"] = r.min_gap;
  j["passed"] = r.passed;
  return j.dump();
}

std::string to_json(const LimitReport& r) {
  ojson j;
  j["target"] = r.target == LimitTarget::Origin ? "ORIGIN" : "INFINITY";
  j["C_estimate"] = r.C_estimate;
  j["cauchy_variation"] = r.cauchy_variation;
  j["window"] = window_json(r.window);
  j["threshold"] = r.threshold;
  j["passed"] = r.passed;
  return j.dump();
}

std::string to_json(const RateReport& r) {
  ojson j;
  j["fitted_exponent"] = r.fitted_exponent;
  j["fit_residual"] = r.fit_residual;
  j["claimed_bound"] = r.claimed_bound;
  j["tolerance"] = r.tolerance;
  j["passed"] = r.passed;
  j["coefficient"] = r.coefficient;
  j["coefficient_target"] = r.coefficient_target;
  j["sup_mismatch"] = r.sup_mismatch;
  return j.dump();
}

std::string to_json(const BoundsReport& r) {
  ojson j;
  j["origin_upper"] = r.origin_upper;
  j["origin_lower"] = r.origin_lower;
  j["origin_c2"] = r.origin_c2;
  j["infinity_upper"] = r.infinity_upper;
  j["infinity_lower"] = r.infinity_lower;
  j["infinity_C2"] = r.infinity_C2;
  j["growth_exponent"] = r.growth_exponent;
  j["tau"] = r.tau;
  j["passed"] = r.passed;
  return j.dump();
}

}  // namespace hardyq
