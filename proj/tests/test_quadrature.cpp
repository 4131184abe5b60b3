#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "tfdg/errors.hpp"
#include "tfdg/quadrature.hpp"

using namespace tfdg;

TEST_SUITE("quadrature") {
  TEST_CASE("gamma matches reference values") {
    CHECK(tfdg::gamma(1.6) == doctest::Approx(0.8935153492876902614366).epsilon(1e-14));
    CHECK(tfdg::gamma(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
    CHECK(tfdg::gamma(5.0) == doctest::Approx(24.0).epsilon(1e-14));
    CHECK(tfdg::gamma(1.5) == doctest::Approx(0.5 * std::sqrt(std::numbers::pi)).epsilon(1e-14));
    CHECK(tfdg::gamma(0.1) == doctest::Approx(9.513507698668731836).epsilon(1e-13));
    CHECK_THROWS_AS(tfdg::gamma(0.0), ArgumentError);
    CHECK_THROWS_AS(tfdg::gamma(-1.5), ArgumentError);
  }

  TEST_CASE("gamma recurrence, relative 1e-12") {
    for (double x = 0.05; x < 25.0; x += 0.173) CHECK(std::abs(tfdg::gamma(x + 1) - x * tfdg::gamma(x)) <= 1e-12 * tfdg::gamma(x + 1));
  }

  TEST_CASE("legendre values and derivatives") {
    const auto p2 = legendre(2, 0.5);
    CHECK(p2.value == doctest::Approx(-0.125));
    CHECK(p2.derivative == doctest::Approx(1.5));
    const auto p3 = legendre(3, 1.0);
    CHECK(p3.value == doctest::Approx(1.0));
    CHECK(p3.derivative == doctest::Approx(6.0));
  }

  TEST_CASE("gauss rule nodes, weights and exactness") {
    const auto g2 = gauss_rule(2);
    CHECK(g2.nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(g2.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
    for (int n = 1; n <= 32; ++n) {
      const auto g = gauss_rule(n);
      REQUIRE(g.npoints() == n);
      double wsum = 0.0;
      for (int i = 0; i < n; ++i) {
        wsum += g.weights[i];
        CHECK(g.weights[i] > 0.0);
        CHECK(g.nodes[i] == doctest::Approx(-g.nodes[n - 1 - i]).epsilon(1e-15));
        if (i > 0) CHECK(g.nodes[i] > g.nodes[i - 1]);
      }
      CHECK(wsum == doctest::Approx(2.0).epsilon(1e-13));
      for (int p = 0; p <= 2 * n - 1 && n <= 20; ++p) {
        const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
        CHECK(std::abs(g.integrate([p](double z) { return std::pow(z, p); }) - exact) <= 1e-12);
      }
    }
    CHECK_THROWS_AS(gauss_rule(0), ArgumentError);
    CHECK_THROWS_AS(gauss_rule(33), ArgumentError);
  }

  TEST_CASE("lobatto rule includes endpoints and is exact to degree 2n-3") {
    const auto l3 = lobatto_rule(3);
    CHECK(l3.nodes[0] == -1.0);
    CHECK(std::abs(l3.nodes[1]) < 1e-15);
    CHECK(l3.nodes[2] == 1.0);
    CHECK(l3.weights[0] == doctest::Approx(1.0 / 3.0));
    CHECK(l3.weights[1] == doctest::Approx(4.0 / 3.0));
    for (int n = 2; n <= 20; ++n) {
      const auto l = lobatto_rule(n);
      CHECK(l.nodes.front() == -1.0);
      CHECK(l.nodes.back() == 1.0);
      for (int p = 0; p <= 2 * n - 3; ++p) {
        const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
        CHECK(std::abs(l.integrate([p](double z) { return std::pow(z, p); }) - exact) <= 1e-12);
      }
    }
    CHECK_THROWS_AS(lobatto_rule(1), ArgumentError);
  }

  TEST_CASE("lagrange basis: cardinality, partition of unity, exact interpolation") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 1; k <= 6; ++k) {
      const LagrangeBasis basis(k);
      const auto nodes = basis.nodes();
      for (int i = 0; i <= k; ++i) {
        const auto ev = basis.eval(nodes[i]);
        for (int j = 0; j <= k; ++j) CHECK(ev.values[j] == (i == j ? 1.0 : 0.0));
      }
      // p(z) = sum_m c_m z^m of degree k is reproduced with its derivative.
      std::vector<double> c(k + 1);
      for (auto& x : c) x = u(rng);
      const auto p = [&](double z) {
        double s = 0.0;
        for (int m = k; m >= 0; --m) s = s * z + c[m];
        return s;
      };
      const auto dp = [&](double z) {
        double s = 0.0;
        for (int m = k; m >= 1; --m) s = s * z + m * c[m];
        return s;
      };
      for (int trial = 0; trial < 20; ++trial) {
        const double z = u(rng);
        const auto ev = basis.eval(z);
        double sum = 0.0, dsum = 0.0, v = 0.0, dv = 0.0;
        for (int j = 0; j <= k; ++j) {
          sum += ev.values[j];
          dsum += ev.derivatives[j];
          v += ev.values[j] * p(nodes[j]);
          dv += ev.derivatives[j] * p(nodes[j]);
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(std::abs(dsum) < 1e-11);
        CHECK(v == doctest::Approx(p(z)).epsilon(1e-12));
        CHECK(dv == doctest::Approx(dp(z)).epsilon(1e-10));
      }
    }
  }
}
