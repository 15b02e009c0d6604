// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hardyq/barriers.hpp"
#include "hardyq/expansion.hpp"
#include "hardyq/exponents.hpp"
#include "hardyq/radial_ode.hpp"
#include "hardyq/solution_io.hpp"
#include "hardyq/verify.hpp"
#include "oracles.hpp"

using namespace hardyq;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}


int failures = 0;

void run(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out.passed = false;
    out.detail = std::string("threw: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.require(secs < budget_s, fmt("runtime %.3g s over %.3g s", secs, budget_s));
  if (!out.passed) ++failures;
  std::printf("criterion %2d %s: %s (%.3f s)%s%s\n", id, out.passed ? "PASS" : "FAIL", title,
              secs, out.detail.empty() ? "" : " ", out.detail.c_str());
  std::fflush(stdout);
}

ProblemParams random_params(std::mt19937_64& rng, bool p_is_two) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ProblemParams q;
  q.N = 3.0 + std::floor(unit(rng) * 6.0);
  q.p = p_is_two ? 2.0 : 1.05 + unit(rng) * (q.N - 1.1);
  q.mu = unit(rng) * 0.999 * std::pow((q.N - q.p) / q.p, q.p);
  q.m = 0.1 + 3.0 * unit(rng);
  return q;
}

const Nonlinearity kCubic = Nonlinearity::power(4.0);

struct Run {
  GroundState gs;
  FarFieldMatch far;
};

Run model_run(const ProblemParams& q, double tol, double r0) {
  ShootingOptions so;
  so.tol = tol;
  so.r0 = r0;
  so.r_max = 25.0;
  Run run{shoot_ground_state(q, kCubic, so), {}};
  FarFieldOptions fo;
  fo.tol = tol;
  fo.r_end = 25.0;
  fo.r_switch = std::min(1.0, run.gs.r_reliable);
  run.far = continue_to_infinity(run.gs.solution, fo);
  return run;
}

}  // namespace

int main() {
  const ProblemParams baseline{3, 2, 0.0, 1};
  const ProblemParams hardy{3, 2, 3.0 / 16.0, 1};
  const Window tail{10.0, 20.0};
  Run run7;

  run(1, "exponent closed forms", 1.0, [] {
    Outcome o;
    std::mt19937_64 rng(1);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const ProblemParams q = random_params(rng, true);
      const Exponents e = solve_exponents(q);
      const double mb = mu_bar(q);
      worst = std::max({worst, std::abs(e.gamma1 - (std::sqrt(mb) - std::sqrt(mb - q.mu))),
                        std::abs(e.gamma2 - (std::sqrt(mb) + std::sqrt(mb - q.mu)))});
    }
    o.require(worst <= 1e-10, fmt("max deviation %.3g", worst));
    for (double N : {3.0, 4.0, 7.0})
      for (double p : {1.5, 2.0, 2.5}) {
        const Exponents e = solve_exponents({N, p, 0.0, 1});
        o.require(e.gamma1 == 0.0 && e.gamma2 == (N - p) / (p - 1), "mu = 0 roots not exact");
      }
    o.detail = o.passed ? fmt("max deviation %.3g over 200 tuples", worst) : o.detail;
    return o;
  });

  run(2, "root residuals for general p", 1.0, [] {
    Outcome o;
    std::mt19937_64 rng(2);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const ProblemParams q = random_params(rng, false);
      const Exponents e = solve_exponents(q);
      worst = std::max({worst, std::abs(oracle::gamma_mu(e.gamma1, q.N, q.p, q.mu)),
                        std::abs(oracle::gamma_mu(e.gamma2, q.N, q.p, q.mu))});
    }
    o.require(worst <= 1e-10, fmt("max |Gamma| %.3g", worst));
    if (o.passed) o.detail = fmt("max |Gamma| %.3g over 200 tuples", worst);
    return o;
  });

  run(3, "expansion recursion", 1.0, [] {
    Outcome o;
    std::mt19937_64 rng(3);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const ProblemParams q = random_params(rng, false);
      const ExpansionSeries s = build_series(q);
      const double c0 = std::pow(q.m / (q.p - 1), (q.p - 1) / q.p);
      const double a0 = q.p * std::pow(c0, 1 / (q.p - 1));
      worst = std::max(worst, std::abs(s.c[0] - c0) / c0);
      if (s.k >= 1) worst = std::max(worst, std::abs(s.c[1] - (q.N - 1) * c0 / a0) / s.c[1]);
    }
    o.require(worst <= 1e-12, fmt("c0/c1 relative deviation %.3g", worst));
    const ExpansionSeries s = build_series({5, 3, 0.0, 2}, 3);
    const auto want = oracle::expansion_coeffs(5, 3, 2, 3);
    const double d2 = std::abs(s.c[2] - want[2]), d3 = std::abs(s.c[3] - want[3]);
    o.require(d2 <= 1e-9 && d3 <= 1e-9, fmt("c2 off by %.3g, c3 off by %.3g", d2, d3));
    // Frozen oracle values.
    o.require(std::abs(want[2] - 8.0 / 9.0) < 1e-12 && std::abs(want[3] - 8.0 / 81.0) < 1e-12,
              "oracle disagrees with frozen 8/9, 8/81");
    if (o.passed)
      o.detail = fmt("c0/c1 dev %.3g; c2 = %.15g, c3 = %.15g", worst, s.c[2], s.c[3]);
    return o;
  });

  run(4, "Taylor identities", 1.0, [] {
    Outcome o;
    std::mt19937_64 rng(4);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const ProblemParams q = random_params(rng, false);
      const ExpansionSeries s = build_series(q);
      worst = std::max({worst, std::abs(f_taylor_deriv(0, s.phi_inf, q.p) - q.m) / q.m,
                        std::abs(f_taylor_deriv(1, s.phi_inf, q.p) - s.alpha0) / s.alpha0});
    }
    o.require(worst <= 1e-12, fmt("max relative deviation %.3g", worst));
    if (o.passed) o.detail = fmt("max relative deviation %.3g", worst);
    return o;
  });

  run(5, "barrier identities", 1.0, [&] {
    Outcome o;
    double w1_worst = 0.0;
    for (ProblemParams q : {ProblemParams{3, 2, 0.0, 1}, ProblemParams{5, 3, 0.0, 1}}) {
      const double alpha = exp_profile_rate(q, 0.0);
      for (int i = 0; i < 50; ++i) {
        const double r = 0.05 * std::pow(1000.0, i / 49.0);
        const ExpProfile e = exponential_profile(r, alpha, q);
        const RadialJet j{e.value, -alpha * e.value, alpha * alpha * e.value};
        const double rhs = e.source * std::pow(e.value, q.p - 1);
        const double op = residual_radial(j, r, q, {q.m, false, nullptr});
        w1_worst = std::max(w1_worst, std::abs(op - rhs) / std::abs(rhs));
      }
    }
    o.require(w1_worst <= 1e-10, fmt("w1 residual %.3g", w1_worst));

    double q_worst = 0.0;
    for (ProblemParams q : {ProblemParams{3, 2, 0.0, 1}, ProblemParams{5, 3, 0.0, 2}}) {
      for (double g : {-1.0, 1.0}) {
        const InfinityBarrier b = make_infinity_barrier(q, g, 0.3);
        const auto v = [&](long double r) {
          return std::pow(r, -(long double)b.alpha_decay) *
                 std::exp(-(long double)b.beta * r) *
                 (1 - (long double)g * std::pow(r, -(long double)b.delta));
        };
        for (double r : {3.0, 5.0, 10.0, 30.0, 100.0}) {
          const double Q = Q_func(b, r, q);
          const double fd = oracle::fd_operator_ratio(v, r, q.N, q.p, q.m, 0.0);
          q_worst = std::max(q_worst, std::abs(Q - fd) / std::abs(Q));
        }
      }
    }
    o.require(q_worst <= 1e-7, fmt("Q vs finite differences %.3g", q_worst));

    std::string trend;
    for (double g : {1.0, -1.0}) {
      const InfinityBarrier b = make_infinity_barrier(baseline, g, 0.3);
      const double ratio = Q_func(b, 1e4, baseline) * std::pow(1e4, 1.3) / Q_leading(b, baseline);
      trend += (trend.empty() ? "" : ", ") +
               fmt("gamma=%+.0f: Q r^(d+1)/Q0 - 1 = %+.4f", g, ratio - 1);
      o.require(std::abs(ratio - 1) <= 0.02,
                fmt("gamma=%+.0f: Q r^(d+1) not within 2%% of Q0 at r=1e4", g));
    }
    o.detail += (o.detail.empty() ? "" : "; ") +
                fmt("w1 %.2g, Q-fd %.2g; ", w1_worst, q_worst) + trend;
    return o;
  });

  run(6, "h-function identities", 1.0, [] {
    Outcome o;
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double h0 = 0.0, dh = 0.0;
    for (int i = 0; i < 100; ++i) {
      ProblemParams q = random_params(rng, false);
      q.mu = (0.02 + 0.95 * unit(rng)) * mu_bar(q);
      const double g1 = solve_exponents(q).gamma1;
      const double eps = (0.05 + 0.9 * unit(rng)) * q.p;
      h0 = std::max(h0, std::abs(h_func(0.0, q, g1, eps)));
      // h has a kink where γ1 - (γ1-ε)t vanishes, at distance γ1/|γ1-ε| from 0.
      const double d = 1e-4 * std::min(1.0, g1 / std::abs(g1 - eps));
      const double fd = (-h_func(2 * d, q, g1, eps) + 8 * h_func(d, q, g1, eps) -
                         8 * h_func(-d, q, g1, eps) + h_func(-2 * d, q, g1, eps)) /
                        (12 * d);
      const double hp = h_prime_at_zero(q, g1, eps);
      dh = std::max(dh, std::abs(fd - hp) / std::abs(hp));
    }
    o.require(h0 <= 1e-12, fmt("|h(0)| %.3g", h0));
    o.require(dh <= 1e-6, fmt("h'(0) relative deviation %.3g", dh));
    if (o.passed) o.detail = fmt("|h(0)| %.3g, h'(0) deviation %.3g", h0, dh);
    return o;
  });

  run(7, "ground state, mu = 0", 30.0, [&] {
    Outcome o;
    run7 = model_run(baseline, 1e-12, 1e-6);
    const LimitReport lim = infinity_limit(run7.far.solution, tail);
    o.require(lim.cauchy_variation <= 1e-2, fmt("infinity variation %.3g", lim.cauchy_variation));
    const double c_half = model_run(baseline, 0.5e-12, 0.5e-6).gs.C_star;
    const double drift = std::abs(c_half - run7.gs.C_star) / run7.gs.C_star;
    o.require(drift < 5e-5, fmt("C* drift %.3g under halving", drift));
    o.detail += (o.detail.empty() ? "" : "; ") +
                fmt("C* = %.12g (halved r0, tol: %.12g), variation %.3g", run7.gs.C_star,
                    c_half, lim.cauchy_variation);
    return o;
  });

  run(8, "ground state, Hardy case", 60.0, [&] {
    Outcome o;
    ShootingOptions so;
    so.r_max = 25.0;
    const GroundState gs = shoot_ground_state(hardy, kCubic, so);
    o.require(std::abs(gs.exponents.gamma1 - 0.25) < 1e-12, "gamma1 != 1/4");
    const Window near0{1e-5, 1e-3};
    const LimitReport lim = origin_limit(gs.solution, gs.exponents.gamma1, near0);
    o.require(lim.passed && lim.cauchy_variation <= 1e-2,
              fmt("origin variation %.3g", lim.cauchy_variation));
    const RateReport rate = rate_fit(gs.solution, RateQuantity::WMinusLimit, near0);
    o.require(rate.fitted_exponent > 0.0, fmt("w rate exponent %.3g", rate.fitted_exponent));
    o.detail += (o.detail.empty() ? "" : "; ") +
                fmt("C* = %.10g, origin variation %.3g, w rate %.3g", gs.C_star,
                    lim.cauchy_variation, rate.fitted_exponent);
    return o;
  });

  run(9, "expansion agreement on the mu = 0 run", 10.0, [&] {
    Outcome o;
    const RadialSolution& far = run7.far.solution;
    const RateReport e = expansion_check(far, build_series(baseline, 2), tail);
    o.require(e.fitted_exponent >= 2.0, fmt("mismatch decays like r^-%.3g", e.fitted_exponent));
    const RateReport c = rate_fit(far, RateQuantity::Phi1, tail);
    const double rel = std::abs(c.coefficient - c.coefficient_target) / c.coefficient_target;
    o.require(rel <= 0.05, fmt("phi1 r coefficient off by %.3g", rel));
    o.detail += (o.detail.empty() ? "" : "; ") +
                fmt("mismatch ~ r^-%.3g, phi1 r -> %.6g (c1 = %.6g)", e.fitted_exponent,
                    c.coefficient, c.coefficient_target);
    return o;
  });

  run(10, "comparison consistency", 5.0, [&] {
    Outcome o;
    const RadialSolution& far = run7.far.solution;
    const ComparisonReport cr = barrier_comparison(far, tail.hi);
    o.require(cr.passed, fmt("scaled barrier exceeds u; min gap %.3g", cr.min_gap));
    // Negative control: lift the barrier by u(R2) inside the annulus.
    std::vector<double> r, u;
    for (std::size_t i = 0; i < far.size(); ++i)
      if (far.r[i] >= cr.annulus.lo && far.r[i] <= cr.annulus.hi) {
        r.push_back(far.r[i]);
        u.push_back(std::exp(far.logu[i]));
      }
    auto v = scaled_subsolution(r, u.front(), cr.R2, 0.3, baseline);
    for (std::size_t i = 1; i + 1 < v.size(); ++i) v[i] += u.front();
    o.require(!comparison_check(r, u, v, cr.annulus), "negative control passed");
    o.detail += (o.detail.empty() ? "" : "; ") +
                fmt("annulus [%.4g, %.4g], min gap %.3g", cr.annulus.lo, cr.annulus.hi,
                    cr.min_gap);
    return o;
  });

  run(11, "Hardy quadrature", 5.0, [] {
    Outcome o;
    int count = 0;
    double min_excess = 1e300;
    const auto tent = [](double a, double b, double c) {
      RadialFn phi = [=](double r) {
        return r <= a || r >= c ? 0.0 : (r <= b ? (r - a) / (b - a) : (c - r) / (c - b));
      };
      RadialFn dphi = [=](double r) {
        return r <= a || r >= c ? 0.0 : (r <= b ? 1 / (b - a) : -1 / (c - b));
      };
      return std::pair{phi, dphi};
    };
    const auto bump = [](double a, double c) {
      RadialFn phi = [=](double r) {
        if (r <= a || r >= c) return 0.0;
        const double s = std::sin(M_PI * (r - a) / (c - a));
        return s * s;
      };
      RadialFn dphi = [=](double r) {
        if (r <= a || r >= c) return 0.0;
        return M_PI / (c - a) * std::sin(2 * M_PI * (r - a) / (c - a));
      };
      return std::pair{phi, dphi};
    };
    const std::vector<ProblemParams> shapes{{3, 2, 0, 1}, {5, 3, 0, 1}, {4, 1.5, 0, 1},
                                            {6, 2.5, 0, 1}};
    for (const ProblemParams& q : shapes) {
      const double mb = mu_bar(q);
      std::vector<std::tuple<RadialFn, RadialFn, std::vector<double>>> suite;
      auto [t1, d1] = tent(0.0, 1.0, 2.0);
      suite.emplace_back(t1, d1, std::vector<double>{0.0, 1.0, 2.0});
      auto [t2, d2] = tent(0.5, 0.6, 3.0);
      suite.emplace_back(t2, d2, std::vector<double>{0.5, 0.6, 3.0});
      auto [t3, d3] = tent(0.0, 0.01, 5.0);
      suite.emplace_back(t3, d3, std::vector<double>{0.0, 0.01, 5.0});
      auto [b1, e1] = bump(0.0, 1.0);
      suite.emplace_back(b1, e1, std::vector<double>{0.0, 1.0});
      auto [b2, e2] = bump(1.0, 10.0);
      suite.emplace_back(b2, e2, std::vector<double>{1.0, 10.0});
      for (auto& [phi, dphi, br] : suite) {
        const double ratio = hardy_ratio(q, phi, dphi, br, 128);
        min_excess = std::min(min_excess, ratio / mb - 1);
        o.require(ratio >= mb, fmt("ratio %.6g below mu_bar %.6g", ratio, mb));
        ++count;
      }
    }
    o.require(count == 20, "suite size");

    // Ramp up on [0, rho], r^{a+s} up to 1, r^{a-s} up to R, ramp down on
    // [R, 2R]; a = -(N-p)/p. Both ramps carry O(rho^{sp}) and O(R^{-sp})
    // of the integrals.
    std::string approach;
    for (const ProblemParams& q : shapes) {
      const double a = -(q.N - q.p) / q.p, mb = mu_bar(q), rho = 1e-50, R = 1e50;
      double last = 0.0;
      for (double s : {0.2, 0.1, 0.05}) {
        const RadialFn phi = [=](double r) {
          if (r <= rho) return std::pow(rho, a + s) * (r / rho);
          if (r <= 1) return std::pow(r, a + s);
          if (r <= R) return std::pow(r, a - s);
          return r < 2 * R ? std::pow(R, a - s) * (2 - r / R) : 0.0;
        };
        const RadialFn dphi = [=](double r) {
          if (r <= rho) return std::pow(rho, a + s) / rho;
          if (r <= 1) return (a + s) * std::pow(r, a + s - 1);
          if (r <= R) return (a - s) * std::pow(r, a - s - 1);
          return r < 2 * R ? -std::pow(R, a - s) / R : 0.0;
        };
        last = hardy_ratio(q, phi, dphi, {0.0, rho, 1.0, R, 2 * R}, 256) / mb - 1;
        o.require(last >= 0.0, fmt("near-extremal ratio %.3g below mu_bar", last));
      }
      o.require(last <= 0.05, fmt("near-extremal family stops %.3g above mu_bar", last));
      approach += fmt(" %.2g", last);
    }
    o.detail += (o.detail.empty() ? "" : "; ") +
                fmt("%.0f functions, min excess %.3g; near-extremal excess", count, min_excess) +
                approach;
    return o;
  });

  run(12, "determinism and round trip", 30.0, [&] {
    Outcome o;
    VerifyConfig cfg;
    const Run a = model_run(hardy, 1e-10, 1e-6);
    const Run b = model_run(hardy, 1e-10, 1e-6);
    const std::string ja = verify_bundle(a.gs.solution, &a.far.solution, cfg).json;
    const std::string jb = verify_bundle(b.gs.solution, &b.far.solution, cfg).json;
    o.require(ja == jb, "verification JSON differs between identical runs");
    double worst = 0.0;
    for (const RadialSolution* s : {&a.gs.solution, &a.far.solution}) {
      std::stringstream io;
      write_solution_csv(io, *s);
      const RadialSolution t = read_solution_csv(io);
      o.require(t.size() == s->size(), "row count changed");
      for (std::size_t i = 0; i < s->size() && i < t.size(); ++i)
        for (auto [x, y] : {std::pair{s->r[i], t.r[i]}, std::pair{s->logu[i], t.logu[i]},
                            std::pair{s->v[i], t.v[i]}})
          if (x != 0.0) worst = std::max(worst, std::abs(x - y) / std::abs(x));
    }
    o.require(worst <= 5e-16, fmt("round trip relative error %.3g", worst));
    if (o.passed) o.detail = fmt("JSON identical (%.0f bytes), round trip error %.3g",
                                 static_cast<double>(ja.size()), worst);
    return o;
  });

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
