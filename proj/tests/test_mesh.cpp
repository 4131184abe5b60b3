#include <doctest.h>

#include <cmath>

#include "tfdg/errors.hpp"
#include "tfdg/mesh.hpp"

using namespace tfdg;

TEST_SUITE("mesh") {
  TEST_CASE("graded time mesh follows t_n = T ((n-1)/N)^r") {
    const GradedTimeMesh m(2.0, 8, 2.5);
    CHECK(m.levels() == 9);
    CHECK(m.time(1) == 0.0);
    CHECK(m.time(9) == 2.0);
    for (int n = 1; n <= 9; ++n) CHECK(m.time(n) == doctest::Approx(2.0 * std::pow((n - 1) / 8.0, 2.5)));
    for (int n = 2; n <= 8; ++n) CHECK(m.step(n) > m.step(n - 1));
    double total = 0.0;
    for (int n = 1; n <= 8; ++n) total += m.step(n);
    CHECK(total == doctest::Approx(2.0).epsilon(1e-14));
  }

  TEST_CASE("r = 1 gives a uniform mesh") {
    const GradedTimeMesh m(1.0, 4, 1.0);
    for (int n = 1; n <= 4; ++n) CHECK(m.step(n) == doctest::Approx(0.25));
  }

  TEST_CASE("time mesh rejects invalid parameters") {
    CHECK_THROWS_AS(graded_mesh(0.0, 4, 1.0), ArgumentError);
    CHECK_THROWS_AS(graded_mesh(1.0, 0, 1.0), ArgumentError);
    CHECK_THROWS_AS(graded_mesh(1.0, 4, 0.5), ArgumentError);
  }

  TEST_CASE("spatial mesh nodes, mapping and location") {
    const SpatialMesh m(3.0, 6);
    CHECK(m.width() == doctest::Approx(0.5));
    CHECK(m.node(1) == 0.0);
    CHECK(m.node(7) == 3.0);
    CHECK(m.left(2) == doctest::Approx(1.0));
    CHECK(m.right(2) == doctest::Approx(1.5));
    CHECK(m.map(2, -1.0) == doctest::Approx(1.0));
    CHECK(m.map(2, 1.0) == doctest::Approx(1.5));
    CHECK(m.map(2, 0.0) == doctest::Approx(1.25));
    CHECK(m.locate(0.0) == 0);
    CHECK(m.locate(1.2) == 2);
    CHECK(m.locate(3.0) == 5);
    CHECK_THROWS_AS(uniform_mesh(1.0, 0), ArgumentError);
    CHECK_THROWS_AS(uniform_mesh(-1.0, 4), ArgumentError);
  }
}
