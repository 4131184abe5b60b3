#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "tfdg/errors.hpp"
#include "tfdg/fractional.hpp"
#include "tfdg/quadrature.hpp"

using namespace tfdg;

namespace {

// Direct sum of the L1 definition: sum_j (u_{j+1} - u_j)/tau_j int_{t_j}^{t_{j+1}} (t_n - s)^{-a} ds / Gamma(1-a).
double l1_oracle(const GradedTimeMesh& m, double alpha, const std::vector<double>& u, int n) {
  double s = 0.0;
  for (int j = 1; j <= n - 1; ++j) {
    const double a = m.time(n) - m.time(j), b = m.time(n) - m.time(j + 1);
    s += (u[j] - u[j - 1]) / m.step(j) * (std::pow(a, 1 - alpha) - std::pow(b, 1 - alpha)) / (1 - alpha);
  }
  return s / tfdg::gamma(1 - alpha);
}

}  // namespace

TEST_SUITE("fractional") {
  TEST_CASE("uniform mesh diagonal equals tau^-a / Gamma(2-a)") {
    const L1Coefficients c(GradedTimeMesh(1.0, 4, 1.0), 0.5);
    for (int n = 2; n <= 5; ++n) CHECK(c.diag(n) == doctest::Approx(2.256758334191025147792).epsilon(1e-14));
    CHECK(c(2, 1) == doctest::Approx(2.256758334191025147792).epsilon(1e-14));
    CHECK(c(3, 0) == 0.0);
  }

  TEST_CASE("coefficients match the closed formula, are positive and increase in j") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> alpha(0.05, 0.95), grading(1.0, 5.0);
    for (int trial = 0; trial < 30; ++trial) {
      const GradedTimeMesh m(1.5, 3 + trial * 5, grading(rng));
      const double a = alpha(rng);
      const L1Coefficients c(m, a);
      for (int n = 2; n <= m.levels(); ++n)
        for (int j = 1; j <= n - 1; ++j) {
          CHECK(c(n, j) > 0.0);
          if (j > 1) CHECK(c(n, j) >= c(n, j - 1));
          // Extended-precision direct formula; it still cancels when tau_j << t_n - t_j, so skip those.
          const long double e = 1.0L - a;
          const long double tn = m.time(n), tj = m.time(j), tj1 = m.time(j + 1);
          const long double direct =
              (std::pow(tn - tj, e) - std::pow(tn - tj1, e)) / ((tj1 - tj) * (long double)tfdg::gamma(2 - a));
          if (m.step(j) > 1e-5 * (m.time(n) - m.time(j)))
            CHECK(c(n, j) == doctest::Approx(static_cast<double>(direct)).epsilon(1e-13));
        }
    }
  }

  TEST_CASE("history weights telescope to the diagonal and are nonnegative") {
    const L1Coefficients c(GradedTimeMesh(1.0, 50, 3.0), 0.3);
    for (int n = 2; n <= 51; ++n) {
      const auto h = history_weights(c, n);
      REQUIRE(h.weights.size() == static_cast<std::size_t>(n - 1));
      double sum = 0.0;
      for (double w : h.weights) {
        CHECK(w >= 0.0);
        sum += w;
      }
      CHECK(std::abs(sum - h.diag) <= 1e-12 * h.diag);
    }
    const auto h2 = history_weights(c, 2);
    CHECK(h2.weights.size() == 1);
    CHECK(h2.weights[0] == h2.diag);
    CHECK_THROWS_AS(history_weights(c, 1), ArgumentError);
    CHECK_THROWS_AS(history_weights(c, 52), ArgumentError);
  }

  TEST_CASE("alpha outside (0,1) is rejected") {
    CHECK_THROWS_AS(L1Coefficients(GradedTimeMesh(1.0, 4, 1.0), 0.0), ArgumentError);
    CHECK_THROWS_AS(L1Coefficients(GradedTimeMesh(1.0, 4, 1.0), 1.0), ArgumentError);
  }

  TEST_CASE("caputo_power closed forms") {
    CHECK(caputo_power(0.3, 0.3, 0.7) == doctest::Approx(tfdg::gamma(1.3)));
    CHECK(caputo_power(0.3, 0.3, 0.0) == doctest::Approx(tfdg::gamma(1.3)));
    CHECK(caputo_power(0.5, 1.0, 0.49) == doctest::Approx(2.0 * 0.7 / std::sqrt(M_PI)));
    CHECK(caputo_power(0.5, 2.0, 0.0) == 0.0);
    CHECK_THROWS_AS(caputo_power(0.5, 0.0, 1.0), ArgumentError);
    CHECK_THROWS_AS(caputo_power(0.5, 0.2, 0.0), ArgumentError);
  }

  TEST_CASE("l1_apply: constants vanish, u = t and u = t^2 match reference values") {
    const GradedTimeMesh m(1.0, 4, 1.0);
    const L1Coefficients c(m, 0.5);
    const std::vector<double> ones(5, 3.0);
    for (int n = 2; n <= 5; ++n) CHECK(std::abs(l1_apply(c, ones, n)) <= 1e-12 * 3.0 * c.diag(n));

    std::vector<double> lin(5), quad(5);
    for (int n = 1; n <= 5; ++n) {
      lin[n - 1] = m.time(n);
      quad[n - 1] = m.time(n) * m.time(n);
    }
    const double lin_ref[] = {0.5641895835477562869, 0.7978845608028653559, 0.9772050238058398432,
                              1.1283791670955125739};
    const double quad_ref[] = {0.141047395886939071737, 0.481565931974594482444, 0.925338328126770782207,
                               1.451734375852108886474};
    for (int n = 2; n <= 5; ++n) {
      CHECK(l1_apply(c, lin, n) == doctest::Approx(lin_ref[n - 2]).epsilon(1e-14));
      CHECK(l1_apply(c, quad, n) == doctest::Approx(quad_ref[n - 2]).epsilon(1e-14));
      // L1 is exact for linear data.
      CHECK(l1_apply(c, lin, n) == doctest::Approx(caputo_power(0.5, 1.0, m.time(n))).epsilon(1e-14));
    }
    CHECK_THROWS_AS(l1_apply(c, std::vector<double>(2, 0.0), 3), ArgumentError);
  }

  TEST_CASE("l1_apply agrees with the direct sum on graded meshes") {
    const GradedTimeMesh m(1.0, 40, 2.5);
    const L1Coefficients c(m, 0.7);
    std::vector<double> u(41);
    for (int n = 1; n <= 41; ++n) u[n - 1] = std::sin(3 * m.time(n)) + std::pow(m.time(n), 0.7);
    for (int n = 2; n <= 41; ++n) CHECK(l1_apply(c, u, n) == doctest::Approx(l1_oracle(m, 0.7, u, n)).epsilon(1e-9));
  }

  TEST_CASE("truncation error at t = T decays with order at least 2 - a - 0.2 on the graded mesh") {
    for (double a : {0.3, 0.5, 0.7})
      for (double g : {a, 2.0 - a, 3.0}) {
        const double r = (2.0 - a) / a;
        std::vector<double> err;
        // Smooth powers reach the asymptotic regime later on strongly graded meshes.
        const int first = g == a ? 16 : 64;
        for (int N = first; N <= 8 * first; N *= 2) {
          const GradedTimeMesh m(1.0, N, r);
          const L1Coefficients c(m, a);
          std::vector<double> u(N + 1);
          for (int n = 1; n <= N + 1; ++n) u[n - 1] = std::pow(m.time(n), g);
          err.push_back(std::abs(l1_apply(c, u, N + 1) - caputo_power(a, g, 1.0)));
        }
        for (std::size_t i = 0; i + 1 < err.size(); ++i) {
          CAPTURE(a);
          CAPTURE(g);
          CHECK(std::log2(err[i] / err[i + 1]) >= 2.0 - a - 0.2);
        }
      }
  }

  TEST_CASE("theta multipliers: unit diagonal, positive, bounded sum") {
    const L1Coefficients c(GradedTimeMesh(1.0, 4, 1.0), 0.5);
    const ThetaMultipliers theta(c);
    for (int n = 1; n <= 5; ++n) CHECK(theta(n, n) == 1.0);
    for (int n = 2; n <= 5; ++n) {
      for (int j = 1; j <= n; ++j) CHECK(theta(n, j) > 0.0);
      CHECK(theta.stability_sum(n) <= 2.0);
    }
    // Hand recursion for n = 3, j = 2: s_2 theta(2,2) [T(3,2) - T(3,1)].
    const double s2 = 1.0 / c.diag(2);
    CHECK(theta(3, 2) == doctest::Approx(s2 * (c(3, 2) - c(3, 1))));
    // n = 2, j = 1: s_1 theta(1,1) [T(2,1) - T(2,0)] with s_1 = Gamma(2-a) tau_1^a.
    CHECK(theta(2, 1) == doctest::Approx(tfdg::gamma(1.5) * std::sqrt(0.25) * c(2, 1)));
  }

  TEST_CASE("theta stability sum does not grow under refinement") {
    for (double a : {0.3, 0.7}) {
      double previous = 0.0;
      for (int N : {16, 32, 64, 128}) {
        const ThetaMultipliers theta(L1Coefficients(GradedTimeMesh(1.0, N, (2 - a) / a), a));
        double worst = 0.0;
        for (int n = 2; n <= N + 1; ++n) worst = std::max(worst, theta.stability_sum(n));
        if (previous > 0.0) CHECK(worst <= 1.05 * previous);
        previous = worst;
      }
    }
  }
}
