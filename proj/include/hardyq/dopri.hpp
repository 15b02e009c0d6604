#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>

namespace hardyq {

// Dormand-Prince 5(4) with FSAL and a mixed absolute/relative error norm.
// Generic in the state dimension; the radial charts use Dim = 2.
template <std::size_t Dim>
class DormandPrince {
 public:
  using State = std::array<double, Dim>;
  using Rhs = std::function<State(double, const State&)>;

  struct Step {
    double t;
    State y;
  };

  // Observer returns false to stop after an accepted step.
  using Observer = std::function<bool(const Step&)>;

  enum class Outcome { Reached, Stopped, Underflow, NonFinite, Budget };

  struct Result {
    Outcome outcome;
    Step last;
  };

  DormandPrince(Rhs rhs, double tol) : rhs_(std::move(rhs)), tol_(tol) {}

  void set_max_steps(std::size_t n) { max_steps_ = n; }
  void set_initial_step(double h) { h0_ = h; }

  Result run(double t0, const State& y0, double t1, const Observer& observe) const {
    const double dir = t1 >= t0 ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);
    double t = t0;
    State y = y0;
    State k1 = rhs_(t, y);
    if (!finite(k1)) return {Outcome::NonFinite, {t, y}};
    double h = h0_ > 0.0 ? std::min(h0_, span) : initial_step(t, y, k1, span);

    for (std::size_t n = 0; n < max_steps_; ++n) {
      if (std::abs(t1 - t) <= 4.0 * eps() * std::max(1.0, std::abs(t1)))
        return {Outcome::Reached, {t, y}};
      bool last = false;
      if (h >= std::abs(t1 - t)) {
        h = std::abs(t1 - t);
        last = true;
      }
      if (h < 1e-14 * std::max(1.0, std::abs(t)))
        return {Outcome::Underflow, {t, y}};

      const double hs = dir * h;
      State k2 = rhs_(t + c2 * hs, axpy(y, hs, {a21}, {&k1}));
      State k3 = rhs_(t + c3 * hs, axpy(y, hs, {a31, a32}, {&k1, &k2}));
      State k4 = rhs_(t + c4 * hs, axpy(y, hs, {a41, a42, a43}, {&k1, &k2, &k3}));
      State k5 = rhs_(t + c5 * hs,
                      axpy(y, hs, {a51, a52, a53, a54}, {&k1, &k2, &k3, &k4}));
      State k6 = rhs_(t + hs, axpy(y, hs, {a61, a62, a63, a64, a65},
                                   {&k1, &k2, &k3, &k4, &k5}));
      State y5 = axpy(y, hs, {b1, 0.0, b3, b4, b5, b6},
                      {&k1, &k2, &k3, &k4, &k5, &k6});
      State k7 = rhs_(t + hs, y5);

      double err = 0.0;
      bool ok = finite(y5) && finite(k7);
      if (ok) {
        for (std::size_t i = 0; i < Dim; ++i) {
          const double e = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                                 e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
          const double scale = tol_ * (1.0 + std::max(std::abs(y[i]), std::abs(y5[i])));
          err = std::max(err, std::abs(e) / scale);
        }
        ok = std::isfinite(err);
      }
      if (!ok) {
        h *= 0.25;
        continue;
      }
      if (err <= 1.0) {
        t = last ? t1 : t + hs;
        y = y5;
        k1 = k7;
        if (!observe({t, y})) return {Outcome::Stopped, {t, y}};
        if (last) return {Outcome::Reached, {t, y}};
        const double grow = err == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(err, -0.2));
        h *= grow;
      } else {
        h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      }
    }
    return {Outcome::Budget, {t, y}};
  }

 private:
  static constexpr double eps() { return 2.220446049250313e-16; }

  static bool finite(const State& s) {
    for (double x : s)
      if (!std::isfinite(x)) return false;
    return true;
  }

  template <std::size_t M>
  static State axpy(const State& y, double h, const double (&a)[M],
                    const State* const (&k)[M]) {
    State out = y;
    for (std::size_t j = 0; j < M; ++j)
      for (std::size_t i = 0; i < Dim; ++i) out[i] += h * a[j] * (*k[j])[i];
    return out;
  }

  double initial_step(double t, const State& y, const State& f0, double span) const {
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < Dim; ++i) {
      const double sc = 1.0 + std::abs(y[i]);
      d0 = std::max(d0, std::abs(y[i]) / sc);
      d1 = std::max(d1, std::abs(f0[i]) / sc);
    }
    double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min(h, 0.01 * span);
    (void)t;
    return std::max(h, 1e-12 * std::max(1.0, span));
  }

  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // b - b*, the embedded 4th-order error weights.
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                          e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;

  Rhs rhs_;
  double tol_;
  double h0_ = 0.0;
  std::size_t max_steps_ = 2'000'000;
};

}  // namespace hardyq
