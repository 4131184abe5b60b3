#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "tfdg/dg.hpp"
#include "tfdg/errors.hpp"
#include "tfdg/norms.hpp"
#include "tfdg/problems.hpp"

using namespace tfdg;

namespace {

std::shared_ptr<const DGSpace> make_space(double ell, int M, int k, double sigma = 1.0, int q = 0) {
  return std::make_shared<const DGSpace>(SpatialMesh(ell, M), k, sigma, q);
}

DGFunction random_function(const std::shared_ptr<const DGSpace>& space, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DGFunction v(space);
  for (int i = 0; i < space->dimension(); ++i) v.coeffs()[i] = u(rng);
  return v;
}

// B(u, v) evaluated from function values and traces, independent of the matrix assembly.
double form_oracle(const DGFunction& u, const DGFunction& v, const SpaceFunction& K, const SpaceFunction& c) {
  const DGSpace& space = u.space();
  const auto rule = gauss_rule(space.degree() + 8);
  double volume = 0.0;
  for (int e = 0; e < space.elements(); ++e)
    for (int q = 0; q < rule.npoints(); ++q) {
      const double z = rule.nodes[q], y = space.mesh().map(e, z);
      volume += rule.weights[q] * space.jacobian() *
                (K(y) * u.derivative(e, z) * v.derivative(e, z) + c(y) * u.value(e, z) * v.value(e, z));
    }
  double flux = 0.0, penalty = 0.0;
  const int last = space.elements() + 1;
  for (int m = 1; m <= last; ++m) {
    const double y = space.mesh().node(m);
    const auto avg_flux = [&](const DGFunction& w) {
      if (m == 1) return K(y) * w.derivative_plus(1);
      if (m == last) return K(y) * w.derivative_minus(last);
      return 0.5 * K(y) * (w.derivative_plus(m) + w.derivative_minus(m));
    };
    const double ju = trace_ops(u, m).jump, jv = trace_ops(v, m).jump;
    flux += avg_flux(u) * jv - avg_flux(v) * ju;
    penalty += space.sigma(m) * ju * jv;
  }
  return volume + flux + penalty;
}

}  // namespace

TEST_SUITE("dg") {
  TEST_CASE("space layout and element mass") {
    auto space = make_space(2.0, 4, 2);
    CHECK(space->dimension() == 12);
    CHECK(space->jacobian() == doctest::Approx(0.25));
    CHECK(space->volume_rule().npoints() == 5);
    CHECK(space->gauss_k_rule().npoints() == 2);
    // Mass matrix entries integrate to the element length.
    CHECK(space->element_mass().sum() == doctest::Approx(0.5));
    CHECK_THROWS_AS(DGSpace(SpatialMesh(1.0, 2), 1, -1.0), ArgumentError);
    CHECK_THROWS_AS(DGSpace(SpatialMesh(1.0, 2), 1, std::vector<double>(2, 1.0)), ArgumentError);
  }

  TEST_CASE("trace operators follow the boundary conventions") {
    auto space = make_space(1.0, 2, 1);
    DGFunction v(space);
    v.coeff(0, 0) = 1.0;  // v(0+)
    v.coeff(0, 1) = 2.0;  // v(0.5-)
    v.coeff(1, 0) = 5.0;  // v(0.5+)
    v.coeff(1, 1) = 3.0;  // v(1-)
    CHECK(trace_ops(v, 1).jump == 1.0);
    CHECK(trace_ops(v, 1).average == 1.0);
    CHECK(trace_ops(v, 2).jump == doctest::Approx(3.0));
    CHECK(trace_ops(v, 2).average == doctest::Approx(3.5));
    CHECK(trace_ops(v, 3).jump == -3.0);
    CHECK(trace_ops(v, 3).average == 3.0);
    CHECK(v.trace_minus(1) == 0.0);
    CHECK(v.trace_plus(3) == 0.0);
    CHECK_THROWS_AS(trace_ops(v, 4), ArgumentError);
  }

  TEST_CASE("assembled operator equals the trace-based form") {
    std::mt19937_64 rng(17);
    const SpaceFunction K = [](double y) { return 1.0 + y * y; };
    const SpaceFunction c = [](double y) { return 2.0 + std::sin(y); };
    for (int k = 1; k <= 3; ++k) {
      auto space = make_space(1.7, 5, k, 0.7, 12);
      const auto A = assemble_full(*space, K, c);
      for (int trial = 0; trial < 20; ++trial) {
        const DGFunction u = random_function(space, rng), v = random_function(space, rng);
        CHECK(A.form(u.coeffs(), v.coeffs()) == doctest::Approx(form_oracle(u, v, K, c)).epsilon(1e-11));
      }
    }
  }

  TEST_CASE("flux terms cancel on the diagonal and coercivity holds") {
    std::mt19937_64 rng(23);
    const SpaceFunction K = [](double y) { return 0.5 + y; };
    const SpaceFunction c = [](double) { return 0.3; };
    auto space = make_space(2.0, 7, 2, 2.0);
    const auto A = assemble_full(*space, K, c);
    auto A13 = assemble_B1(*space, K, c);
    A13 += assemble_B3(*space);
    const double beta = 0.3;  // min(K) = 0.5 > beta, c = 0.3
    for (int trial = 0; trial < 500; ++trial) {
      const DGFunction v = random_function(space, rng);
      const double bvv = A.form(v.coeffs(), v.coeffs());
      const double b13 = A13.form(v.coeffs(), v.coeffs());
      CHECK(std::abs(bvv - b13) <= 1e-12 * std::abs(b13));
      const double dg2 = std::pow(function_norms(v, beta).dg_energy, 2);
      CHECK(bvv >= dg2 - 1e-10 * dg2);
    }
  }

  TEST_CASE("flux matrix transpose swaps the arguments") {
    std::mt19937_64 rng(29);
    auto space = make_space(1.0, 4, 2);
    const auto B2 = assemble_B2(*space, [](double y) { return 1.0 + y; });
    const auto B2t = B2.transposed();
    const DGFunction u = random_function(space, rng), v = random_function(space, rng);
    CHECK(B2t.form(u.coeffs(), v.coeffs()) == doctest::Approx(B2.form(v.coeffs(), u.coeffs())));
    CHECK((B2t.to_dense() - B2.to_dense().transpose()).norm() == 0.0);
  }

  TEST_CASE("Galerkin consistency for a polynomial exact solution") {
    // u = y (1 - y)(y + 2) in V^3 satisfies -(K u')' + c u = F with K = 1 + y, c = 2.
    const auto u = [](double y) { return y * (1 - y) * (y + 2); };
    const auto du = [](double y) { return -3 * y * y - 2 * y + 2; };
    const auto d2u = [](double y) { return -6 * y - 2; };
    const SpaceFunction K = [](double y) { return 1 + y; };
    const SpaceFunction c = [](double) { return 2.0; };
    const SpaceFunction F = [&](double y) { return -(du(y) + (1 + y) * d2u(y)) + 2 * u(y); };
    for (int k = 3; k <= 4; ++k) {
      auto space = make_space(1.0, 6, k, 1.5);
      const DGFunction pu = lobatto_interpolant(space, u);
      const auto A = assemble_full(*space, K, c);
      const Vector b = source_vector(*space, F);
      CHECK((A.apply(pu.coeffs()) - b).norm() <= 1e-10 * b.norm());
      const Vector x = solve(A, b);
      CHECK((x - pu.coeffs()).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }

  TEST_CASE("doubling volume quadrature leaves assembled entries unchanged for the example coefficients") {
    for (const auto& id : {"example1-constant", "example2-variable"}) {
      const auto prob = std::get<LinearProblemSpec>(registry_lookup(id).make(0.5));
      const double t = 0.7, d = 3.0;
      const SpaceFunction K = [&](double y) { return prob.p(t) * prob.a(y); };
      const SpaceFunction c = [&](double y) { return prob.p(t) * prob.b(y) + d; };
      for (int k = 1; k <= 2; ++k) {
        const auto A = assemble_full(*make_space(prob.length, 8, k), K, c).to_dense();
        const auto B = assemble_full(*make_space(prob.length, 8, k, 1.0, 2 * (k + 3)), K, c).to_dense();
        CHECK((A - B).cwiseAbs().maxCoeff() <= 1e-12 * A.cwiseAbs().maxCoeff());
      }
    }
  }

  TEST_CASE("block Thomas solve matches a dense solve") {
    std::mt19937_64 rng(31);
    auto space = make_space(3.0, 9, 3, 0.0);
    const auto A = assemble_full(*space, [](double y) { return 1 + 0.2 * y; }, [](double) { return 0.1; });
    Vector b(space->dimension());
    for (int i = 0; i < b.size(); ++i) b[i] = std::uniform_real_distribution<double>(-1, 1)(rng);
    const Vector x = solve(A, b);
    const Vector xd = A.to_dense().partialPivLu().solve(b);
    CHECK((x - xd).norm() <= 1e-10 * xd.norm());
  }

  TEST_CASE("invalid coefficients and singular systems raise typed errors") {
    auto space = make_space(1.0, 3, 1);
    CHECK_THROWS_AS(assemble_B1(*space, [](double) { return 0.0; }, [](double) { return 1.0; }), CoefficientError);
    CHECK_THROWS_AS(assemble_B1(*space, [](double) { return 1.0; }, [](double) { return -1.0; }), CoefficientError);
    CHECK_THROWS_AS(assemble_B2(*space, [](double y) { return y - 0.5; }), CoefficientError);
    BlockTridiagonalMatrix zero(3, 2);
    CHECK_THROWS_AS(solve(zero, Vector::Ones(6)), SolverError);
  }

  TEST_CASE("projection, mass action and load vector") {
    auto space = make_space(1.0, 4, 2);
    const auto g = [](double y) { return y * y - y; };
    const DGFunction pg = project_initial(space, g);
    for (double y : {0.1, 0.33, 0.5, 0.77}) CHECK(pg.value(y) == doctest::Approx(g(y)).epsilon(1e-13));
    const DGFunction one(space, Vector::Ones(space->dimension()));
    CHECK(apply_mass(*space, one.coeffs()).sum() == doctest::Approx(1.0));
    const std::vector<HistoryTerm> hist{{2.0, std::cref(one)}, {0.5, std::cref(one)}};
    const Vector b = load_vector(*space, [](double) { return 1.0; }, hist);
    CHECK(b.sum() == doctest::Approx(3.5));
    auto other = make_space(1.0, 4, 2);
    const DGFunction foreign(other, Vector::Ones(other->dimension()));
    const std::vector<HistoryTerm> bad{{1.0, std::cref(foreign)}};
    CHECK_THROWS_AS(load_vector(*space, nullptr, bad), ArgumentError);
  }
}
