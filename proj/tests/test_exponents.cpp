#include <doctest.h>

#include <cmath>
#include <random>

#include "hardyq/error.hpp"
#include "hardyq/exponents.hpp"
#include "oracles.hpp"

using namespace hardyq;

namespace {

ProblemParams random_params(std::mt19937_64& rng, bool p_is_two = false) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ProblemParams q;
  q.N = 2.0 + std::floor(unit(rng) * 6.0) + (p_is_two ? 1.0 : 0.0);
  q.p = p_is_two ? 2.0 : 1.05 + unit(rng) * (q.N - 1.1);
  q.mu = unit(rng) * 0.999 * std::pow((q.N - q.p) / q.p, q.p);
  q.m = 1.0;
  return q;
}

}  // namespace

TEST_CASE("mu_bar values") {
  CHECK(mu_bar({3, 2, 0, 1}) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(mu_bar({4, 2, 0, 1}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(mu_bar({5, 3, 0, 1}) == doctest::Approx(8.0 / 27.0).epsilon(1e-15));
  CHECK_THROWS_AS(mu_bar({3, 3, 0, 1}), Error);
  CHECK_THROWS_AS(mu_bar({3, 1, 0, 1}), Error);
}

TEST_CASE("gamma_mu at reference points") {
  const ProblemParams q{3, 2, 3.0 / 16.0, 1};
  CHECK(gamma_mu(0.0, q) == q.mu);
  CHECK(gamma_mu(0.5, q) == doctest::Approx(q.mu - mu_bar(q)).epsilon(1e-15));
  CHECK(std::abs(gamma_mu(0.25, q)) < 1e-16);
  CHECK_THROWS_AS(gamma_mu(-0.1, q), Error);
}

TEST_CASE("solve_exponents closed forms") {
  const Exponents e = solve_exponents({3, 2, 3.0 / 16.0, 1});
  CHECK(e.gamma1 == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(e.gamma2 == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(e.mu_bar == doctest::Approx(0.25));

  const Exponents z = solve_exponents({4, 3, 0.0, 1});
  CHECK(z.gamma1 == 0.0);
  CHECK(z.gamma2 == 0.5);
}

TEST_CASE("solve_exponents matches the bisection oracle") {
  const double N = 4, p = 3, mu = 0.03;
  const auto g = [&](double x) { return oracle::gamma_mu(x, N, p, mu); };
  const double g1 = oracle::bisect(g, 0.0, (N - p) / p);
  const double g2 = oracle::bisect(g, (N - p) / p, (N - p) / (p - 1));
  const Exponents e = solve_exponents({N, p, mu, 1});
  CHECK(std::abs(e.gamma1 - g1) < 1e-11);
  CHECK(std::abs(e.gamma2 - g2) < 1e-11);
}

TEST_CASE("sign bracketing and monotonicity of gamma_mu") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const ProblemParams q = random_params(rng);
    const double crit = (q.N - q.p) / q.p, top = (q.N - q.p) / (q.p - 1);
    CHECK(gamma_mu(0.0, q) >= 0.0);
    CHECK(gamma_mu(crit, q) < 0.0);
    CHECK(gamma_mu(top, q) == doctest::Approx(q.mu).epsilon(1e-9).scale(1.0));
    for (int i = 1; i < 40; ++i) {
      const double a = crit * (i - 1) / 40.0, b = crit * i / 40.0;
      CHECK(gamma_mu(b, q) < gamma_mu(a, q));
      const double c = crit + (top - crit) * (i - 1) / 40.0, d = crit + (top - crit) * i / 40.0;
      CHECK(gamma_mu(d, q) > gamma_mu(c, q));
    }
  }
}

TEST_CASE("roots: p = 2 closed form and residuals for general p") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const ProblemParams q = random_params(rng, true);
    const Exponents e = solve_exponents(q);
    const double mb = mu_bar(q);
    CHECK(std::abs(e.gamma1 - (std::sqrt(mb) - std::sqrt(mb - q.mu))) <= 1e-10);
    CHECK(std::abs(e.gamma2 - (std::sqrt(mb) + std::sqrt(mb - q.mu))) <= 1e-10);
  }
  for (int trial = 0; trial < 200; ++trial) {
    const ProblemParams q = random_params(rng);
    const Exponents e = solve_exponents(q);
    const double crit = (q.N - q.p) / q.p;
    CHECK(e.gamma1 >= 0.0);
    CHECK(e.gamma1 < crit);
    CHECK(e.gamma2 > crit);
    CHECK(e.gamma2 <= (q.N - q.p) / (q.p - 1) + 1e-15);
    CHECK(std::abs(gamma_mu(e.gamma1, q)) <= 10 * kDefaultExponentTol);
    CHECK(std::abs(gamma_mu(e.gamma2, q)) <= 10 * kDefaultExponentTol);
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(solve_exponents({3, 2, 0.25, 1}), Error);
  CHECK_THROWS_AS(solve_exponents({3, 2, -0.1, 1}), Error);
  CHECK_THROWS_AS(solve_exponents({2, 2, 0.0, 1}), Error);
  try {
    validate({3, 2, 0.3, 1});
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidParams);
    CHECK(std::string(e.what()).find("mu_bar") != std::string::npos);
  }
  CHECK_NOTHROW(validate({3, 2, 0.1, -5}));
  CHECK_THROWS_AS(validate_with_positive_mass({3, 2, 0.1, 0}), Error);
}
