#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hardyq/error.hpp"
#include "hardyq/nonlinearity.hpp"
#include "hardyq/solution_io.hpp"

using namespace hardyq;

TEST_CASE("csv round trip") {
  RadialSolution s;
  s.chart = Chart::InfinityPhi;
  s.params = {5, 3, 0.2, 1.5};
  s.f = Nonlinearity({{1.0, 4.0}, {-0.25, 4.5}});
  s.amplitude = 3.164504635091234;
  s.gamma1 = 0.1234567890123456;
  s.tol = 1e-12;
  s.stop = StopReason::TurnUp;
  for (int i = 0; i < 50; ++i) {
    s.r.push_back(1.0 + i * 0.3 + 1e-9 * i * i);
    s.logu.push_back(-std::sqrt(s.r.back()) / 3.0);
    s.v.push_back(std::exp(-s.r.back()) / 7.0);
  }
  std::stringstream io;
  write_solution_csv(io, s);
  const RadialSolution t = read_solution_csv(io);
  CHECK(t.chart == s.chart);
  CHECK(t.params == s.params);
  CHECK(t.f == s.f);
  CHECK(t.amplitude == s.amplitude);
  CHECK(t.gamma1 == s.gamma1);
  CHECK(t.tol == s.tol);
  CHECK(t.stop == s.stop);
  REQUIRE(t.size() == s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(t.r[i] == s.r[i]);
    CHECK(t.logu[i] == s.logu[i]);
    CHECK(t.v[i] == s.v[i]);
  }
}

TEST_CASE("csv rejects malformed input") {
  const auto bad = [](const std::string& text) {
    std::istringstream in(text);
    CHECK_THROWS_AS(read_solution_csv(in), Error);
  };
  bad("");
  bad("r,logu,v\n1,2\n");
  bad("r,logu,v\n1,2,x\n");
  bad("r,logu,v\n2,0,0\n1,0,0\n");
  CHECK_THROWS_AS(read_solution_csv("/nonexistent/dir/file.csv"), Error);
}

TEST_CASE("nonlinearity") {
  const Nonlinearity f({{2.0, 4.0}, {-1.0, 3.0}});
  CHECK(f(2.0) == doctest::Approx(2 * 8 - 4));
  CHECK(f(-2.0) == doctest::Approx(-(2 * 8 - 4)));
  CHECK(f.ratio_from_log(std::log(2.0), 2.0) == doctest::Approx((2 * 8 - 4) / 2.0));
  CHECK(f.growth_constant() == 3.0);
  const ProblemParams q{3, 2, 0.0, 1};
  CHECK(f.growth_exponent(q) == 3.0);
  CHECK(Nonlinearity{}.growth_exponent(q) == doctest::Approx(6.0));
  CHECK_NOTHROW(f.validate(q));
  CHECK_THROWS_AS(Nonlinearity::power(7.0).validate(q), Error);
  CHECK_THROWS_AS(Nonlinearity::power(2.0).validate(q), Error);
  // ratio in log space survives magnitudes that overflow u^{p-1}.
  CHECK(std::isfinite(Nonlinearity::power(4.0).ratio_from_log(-800.0, 3.0)));
}
