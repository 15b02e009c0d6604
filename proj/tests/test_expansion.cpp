#include <doctest.h>

#include <cmath>
#include <random>

#include "hardyq/error.hpp"
#include "hardyq/expansion.hpp"
#include "oracles.hpp"

using namespace hardyq;

TEST_CASE("F derivatives at zero") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double p = 1.1 + 4.0 * unit(rng), m = 0.1 + 5.0 * unit(rng);
    const ExpansionSeries s = build_series({p + 1.0 + 3.0 * unit(rng), p, 0.0, m});
    CHECK(f_taylor_deriv(0, s.phi_inf, p) == doctest::Approx(m).epsilon(1e-12));
    CHECK(f_taylor_deriv(1, s.phi_inf, p) == doctest::Approx(s.alpha0).epsilon(1e-12));
  }
  CHECK(f_taylor_deriv(2, 1.0, 2.0) == 2.0);
  for (int n = 3; n < 8; ++n) CHECK(f_taylor_deriv(n, 1.0, 2.0) == 0.0);
  CHECK(f_taylor_deriv(3, 0.7, 2.0) == 0.0);
}

TEST_CASE("closed-form leading coefficients") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double p = 1.1 + 4.0 * unit(rng), N = p + 0.5 + 4.0 * unit(rng);
    const double m = 0.05 + 4.0 * unit(rng);
    const ExpansionSeries s = build_series({N, p, 0.0, m}, 3);
    const double c0 = std::pow(m / (p - 1), (p - 1) / p);
    const double c1 = (N - 1) / p * std::pow(m / (p - 1), (p - 2) / p);
    CHECK(s.c[0] == doctest::Approx(c0).epsilon(1e-12));
    CHECK(s.c[1] == doctest::Approx(c1).epsilon(1e-12));
    CHECK(s.c[1] == doctest::Approx((N - 1) * s.phi_inf / s.alpha0).epsilon(1e-12));
    CHECK(s.alpha0 == doctest::Approx(p * std::pow(s.phi_inf, 1 / (p - 1))).epsilon(1e-14));
  }
}

TEST_CASE("recursion against the power-series substitution oracle") {
  const ExpansionSeries s = build_series({5, 3, 0.0, 2}, 3);
  // Frozen from exact rational substitution: phi_inf = 1, c1 = 4/3, c2 = 8/9, c3 = 8/81.
  CHECK(s.c[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.c[1] == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(std::abs(s.c[2] - 8.0 / 9.0) < 1e-9);
  CHECK(std::abs(s.c[3] - 8.0 / 81.0) < 1e-9);

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const double p = 1.2 + 3.0 * unit(rng), N = p + 0.5 + 4.0 * unit(rng);
    const double m = 0.2 + 3.0 * unit(rng);
    const int k = 6;
    const ExpansionSeries got = build_series({N, p, 0.0, m}, k);
    const auto want = oracle::expansion_coeffs(N, p, m, k);
    for (int j = 0; j <= k; ++j)
      CHECK(got.c[j] == doctest::Approx(want[j]).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("p = 2 series of the linear decay profile") {
  const ExpansionSeries s = build_series({3, 2, 0.0, 1});
  REQUIRE(s.k == 2);
  CHECK(s.c[0] == 1.0);
  CHECK(s.c[1] == 1.0);
  CHECK(std::abs(s.c[2]) < 1e-15);
  CHECK(eval_series(s, 10.0) == doctest::Approx(1.1).epsilon(1e-15));
  CHECK(eval_series(s, 1e12) == doctest::Approx(s.c[0]).epsilon(1e-11));
}

TEST_CASE("default order and extrapolation flag") {
  CHECK(default_order(2.0) == 2);
  CHECK(default_order(2.999) == 2);
  CHECK(default_order(1.5) == 1);
  CHECK(default_order(3.0) == 3);
  CHECK_FALSE(build_series({3, 1.5, 0.1, 1}).extrapolated);
  CHECK(build_series({3, 1.5, 0.1, 1}, 4).extrapolated);
}

TEST_CASE("hardy coefficient and mass scaling") {
  const ProblemParams q{4, 2.5, 0.2, 1.5};
  const ExpansionSeries s = build_series(q);
  CHECK(s.hardy_coeff == doctest::Approx(-q.mu / s.alpha0).epsilon(1e-15));
  CHECK(s.hardy_coeff ==
        doctest::Approx(-std::pow((q.p - 1) / q.m, 1 / q.p) * q.mu / q.p).epsilon(1e-13));
  // c1 = 1.2 and c2 = 0.48 from exact substitution.
  CHECK(s.c[1] == doctest::Approx(1.2).epsilon(1e-13));
  CHECK(s.c[2] == doctest::Approx(0.48).epsilon(1e-12));

  ProblemParams q2 = q;
  q2.m = 4.0 * q.m;
  const ExpansionSeries s2 = build_series(q2);
  CHECK(s2.c[0] / s.c[0] == doctest::Approx(std::pow(4.0, (q.p - 1) / q.p)));
  CHECK(s2.hardy_coeff / s.hardy_coeff == doctest::Approx(std::pow(4.0, -1 / q.p)));

  const double r = 7.0;
  CHECK(eval_series(s, r) - build_series({4, 2.5, 0.0, 1.5}).c[0] -
            s.c[1] / r - s.c[2] / (r * r) ==
        doctest::Approx(s.hardy_coeff * std::pow(r, -2.5)));
}

TEST_CASE("log-derivative prediction") {
  const ExpansionSeries s = build_series({3, 2, 0.0, 1});
  CHECK(log_derivative_prediction(s, 1e12) == doctest::Approx(-1.0));
  // p = 2: u'/u = -1 - (N-1)/2 / r to first order.
  const double r = 1e4;
  CHECK((log_derivative_prediction(s, r) + 1.0) * r == doctest::Approx(-1.0).epsilon(1e-9));

  const ExpansionSeries s3 = build_series({5, 3, 0.0, 2}, 3);
  const double R = 1e3;
  const double lead = -std::pow(2.0 / 2.0, 1.0 / 3.0);
  CHECK((log_derivative_prediction(s3, R) - lead) * R ==
        doctest::Approx(-(5.0 - 1.0) / (3.0 * 2.0)).epsilon(1e-2));

  ExpansionSeries bad = s;
  bad.c = {-1.0};
  CHECK_THROWS_AS(log_derivative_prediction(bad, 2.0), Error);
  CHECK_THROWS_AS(build_series({3, 2, 0.0, 0.0}), Error);
  CHECK_THROWS_AS(build_series({3, 2, 0.0, 1.0}, -1), Error);
}
