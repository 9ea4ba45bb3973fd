#include "robust/maximal.hpp"

#include <doctest.h>

#include <cmath>

using namespace robust;
using namespace robust::maximal;

namespace {

double sup_gap(const hpq::SpacelikeGraph& A, const hpq::SpacelikeGraph& B) {
  double worst = 0.0;
  for (int k = 0; k < A.lattice().size(); ++k)
    if (A.lattice().valid(k)) worst = std::max(worst, (A.value(k) - B.value(k)).cwiseAbs().maxCoeff());
  return worst;
}

}  // namespace

TEST_CASE("constant boundary is already maximal") {
  const auto model = hpq::PoincareModel::standard(2, 1);
  FlowParams fp;
  fp.target = 1e-9;
  const auto prob = make_problem(model, 0.9, 17, [](const Vec&) { return Vec::Unit(2, 0); }, fp);
  const SolveResult r = solve_maximal(prob);
  CHECK(r.converged);
  CHECK(r.residual < 1e-8);
  CHECK(r.iterations == 0);
}

TEST_CASE("flow from the harmonic guess recovers the boosted plane") {
  // the boosted totally geodesic plane is maximal; its ring values define the problem
  const auto B = hpq::boosted_totally_geodesic(17, 0.9, 0.3);
  FlowParams fp;
  fp.target = 1e-8;
  const SolveResult r = solve_maximal(PlateauProblem{radial_interpolation(B), fp});
  REQUIRE(r.converged);
  // the discrete maximal surface differs from the sampled exact one by the truncation error
  CHECK(sup_gap(r.graph, B) < 2e-3);
  CHECK(hpq::lipschitz_constant(r.graph) <= 1.0);
}

TEST_CASE("explicit flow step is first-order consistent") {
  const auto B = hpq::boosted_totally_geodesic(17, 0.9, 0.4);
  const auto M0 = radial_interpolation(B);
  auto err = [&](double dt) {
    const auto full = flow_step(M0, dt);
    const auto half = flow_step(flow_step(M0, dt / 2), dt / 2);
    return sup_gap(full, half);
  };
  const double dt = 1e-4;
  const double e1 = err(dt), e2 = err(dt / 2);
  REQUIRE(e1 > 0.0);
  // two half steps match one full step to O(dt^2): halving dt divides the gap by about 4
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("invalid problems are rejected") {
  const auto B = hpq::boosted_totally_geodesic(17, 0.9, 0.3);
  CHECK_THROWS_AS(flow_step(B, 0.0), std::invalid_argument);
  FlowParams bad;
  bad.target = -1.0;
  CHECK_THROWS_AS(solve_maximal(PlateauProblem{B, bad}), std::invalid_argument);
  // boundary spinning twice around S^1 is far from 1-Lipschitz
  const auto model = hpq::PoincareModel::standard(2, 1);
  const auto steep = make_problem(model, 0.9, 17, [](const Vec& x) {
    const double a = 6.0 * std::atan2(x(1), x(0));
    Vec v(2);
    v << std::cos(a), std::sin(a);
    return v;
  });
  CHECK(boundary_lipschitz(steep.guess) > 1.0);
  CHECK_THROWS_AS(solve_maximal(steep), std::invalid_argument);
}
