#include <doctest.h>

#include <cmath>
#include <random>

#include "tfdg/errors.hpp"
#include "tfdg/norms.hpp"
#include "tfdg/problems.hpp"

using namespace tfdg;

namespace {

std::shared_ptr<const DGSpace> space_of(double ell, int M, int k, double sigma = 1.0) {
  return std::make_shared<const DGSpace>(SpatialMesh(ell, M), k, sigma);
}

}  // namespace

TEST_SUITE("norms") {
  TEST_CASE("interpolating a member of the space gives zero error") {
    const auto u = [](double y) { return y * y * (2 - y); };
    const auto du = [](double y) { return 4 * y - 3 * y * y; };
    for (int k = 3; k <= 4; ++k) {
      const auto space = space_of(2.0, 5, k);
      const auto e = error_norms(lobatto_interpolant(space, u), u, du, 0.7);
      CHECK(e.l2 <= 1e-13);
      CHECK(e.linf <= 1e-13);
      CHECK(e.dg_energy <= 1e-12);
      CHECK(e.discrete_energy <= 1e-12);
    }
  }

  TEST_CASE("energy norms agree on the space and scale homogeneously") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int k = 1; k <= 4; ++k) {
      const auto space = space_of(1.3, 6, k, 2.0);
      DGFunction v(space);
      for (int i = 0; i < space->dimension(); ++i) v.coeffs()[i] = U(rng);
      const auto a = function_norms(v, 0.8);
      CHECK(a.discrete_energy == doctest::Approx(a.dg_energy).epsilon(1e-10));
      DGFunction w(space, -3.0 * v.coeffs());
      const auto b = function_norms(w, 0.8);
      CHECK(b.l2 == doctest::Approx(3 * a.l2));
      CHECK(b.linf == doctest::Approx(3 * a.linf));
      CHECK(b.dg_energy == doctest::Approx(3 * a.dg_energy));
      // The energy norm dominates the weighted L2 norm.
      CHECK(0.8 * a.l2 * a.l2 <= a.discrete_energy * a.discrete_energy);
    }
  }

  TEST_CASE("interpolation rates for a smooth non-polynomial function") {
    const auto u = [](double y) { return std::sin(y); };
    const auto du = [](double y) { return std::cos(y); };
    std::vector<std::pair<double, double>> dg, disc, l2;
    for (int M : {16, 32, 64, 128}) {
      const auto e = error_norms(lobatto_interpolant(space_of(M_PI, M, 1), u), u, du, 1.0);
      dg.emplace_back(M, e.dg_energy);
      disc.emplace_back(M, e.discrete_energy);
      l2.emplace_back(M, e.l2);
    }
    for (double q : convergence_order(dg)) CHECK(q == doctest::Approx(1.0).epsilon(0.03));
    for (double q : convergence_order(disc)) CHECK(q == doctest::Approx(2.0).epsilon(0.03));
    for (double q : convergence_order(l2)) CHECK(q == doctest::Approx(2.0).epsilon(0.03));
  }

  TEST_CASE("beta weight") {
    const auto space = space_of(M_PI, 8, 1);
    const L1Coefficients l1(GradedTimeMesh(1.0, 10, 2.0), 0.5);
    const auto ex2 = std::get<LinearProblemSpec>(registry_lookup("example2-variable").make(0.5));
    const auto b2 = beta_weight(ex2, *space, l1);
    CHECK_FALSE(b2.fallback);
    CHECK(b2.value == doctest::Approx(1.0));

    LinearProblemSpec no_reaction = ex2;
    no_reaction.b = [](double) { return 0.0; };
    const auto b0 = beta_weight(no_reaction, *space, l1);
    CHECK(b0.fallback);
    CHECK_FALSE(b0.warning.empty());
    CHECK(b0.value > 0.0);
    // min over levels of the diagonal L1 coefficient bounds the fallback.
    double dmin = 1e300;
    for (int n = 2; n <= l1.mesh().levels(); ++n) dmin = std::min(dmin, l1.diag(n));
    CHECK(b0.value <= dmin * (1 + 1e-12));
  }

  TEST_CASE("convergence orders from reference error pairs") {
    const std::vector<std::pair<double, double>> a{{20, 1.3522e-2}, {40, 3.5314e-3}};
    CHECK(convergence_order(a)[0] == doctest::Approx(1.9370).epsilon(1e-4));
    const std::vector<std::pair<double, double>> b{{16, 1.9151e-3}, {32, 8.8080e-4}};
    CHECK(convergence_order(b)[0] == doctest::Approx(1.1206).epsilon(1e-4));
    const std::vector<std::pair<double, double>> gap{{16, 1.0}, {40, 0.1}};
    CHECK_THROWS_AS(convergence_order(gap), ArgumentError);
    const std::vector<std::pair<double, double>> zero{{16, 1.0}, {32, 0.0}};
    CHECK_THROWS_AS(convergence_order(zero), ArgumentError);
    CHECK(convergence_order(std::vector<std::pair<double, double>>{{8, 1.0}}).empty());
  }
}
