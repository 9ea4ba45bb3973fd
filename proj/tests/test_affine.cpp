#include "robust/affine_solver.hpp"

#include <doctest.h>

#include <cmath>

using namespace robust;
using namespace robust::affine;

TEST_CASE("Hilbert distance of the quadrant along the hyperbola xy = 1") {
  const auto C = ConvexCone::orthant(2);
  for (double t : {-1.0, 0.0, 0.7})
    for (double s : {-0.3, 1.1, 2.5}) {
      Vec x(2), y(2);
      x << std::exp(t), std::exp(-t);
      y << std::exp(s), std::exp(-s);
      CHECK(hilbert_distance(C, x, y) == doctest::Approx(2.0 * std::abs(t - s)).epsilon(1e-9));
    }
  Vec out(2);
  out << -1.0, 1.0;
  CHECK_THROWS_AS(hilbert_distance(C, out, Vec::Ones(2)), std::domain_error);
}

TEST_CASE("cones containing a line are rejected") {
  std::vector<Vec> rays{Vec::Unit(3, 0), -Vec::Unit(3, 0), Vec::Ones(3)};
  CHECK_THROWS_WITH_AS(ConvexCone::polytope(rays), doctest::Contains("contains a line"), std::invalid_argument);
  CHECK_THROWS_AS(ConvexCone::round(Vec::Unit(3, 2), M_PI / 2), std::invalid_argument);
  const auto R = ConvexCone::round(Vec::Unit(3, 2), M_PI / 4);
  CHECK(R.contains(Vec::Unit(3, 2)));
  CHECK_FALSE(R.contains(Vec::Unit(3, 0)));
}

TEST_CASE("closed-form affine spheres have concurrent affine normals") {
  const auto H = hyperboloid(2, 33);
  const auto sh = is_affine_sphere(H, 1e-5, 0.1);
  CHECK(sh.ok);
  CHECK(sh.hyperbolic);
  const auto T = titeica(2, 33, std::pow(3.0, -1.5));
  const auto st = is_affine_sphere(T, 1e-5, 0.1);
  CHECK(st.ok);
  CHECK(st.hyperbolic);
  // the upper hemisphere is an elliptic sphere: centre on the convex side
  CHECK_FALSE(is_affine_sphere(hemisphere(33), 1e-3, 0.1).hyperbolic);
}

TEST_CASE("affine normal of the unit hyperboloid is the position vector (mean curvature -1)") {
  const auto H = hyperboloid(2, 33);
  const int c = H.lattice().center();
  const AffineData d = affine_normal(H, c);
  const Vec X = H.point(c);
  CHECK(d.convex);
  CHECK((d.xi - X).norm() < 1e-6);
}

TEST_CASE("minimal-norm basepoint of the hyperboloid is the vertex") {
  const auto H = hyperboloid(2, 33);
  const Vec x = minimal_norm_basepoint(H);
  CHECK(x.norm() < 1e-8);
  // support functional vanishes on the tangent plane, equals 1 at o
  const Vec f = support_functional(H, x);
  CHECK(f.dot(H.point_at(x)) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("sector-curve law on the hyperbola xy = 1/2") {
  const auto P = titeica(1, 401, 0.5);
  Vec zo(2), zx(2);
  zo << std::sqrt(0.5), std::sqrt(0.5);
  zx << 2.0, 0.25;
  const SectorCurve cur = sector_curve(P, P.chart_point(zo), P.chart_point(zx), -1.0, 1.0, 21);
  // x = e^{t} u+ + e^{-t} u- with u+- on the axes: t_x = log(2 / sqrt(1/2))
  CHECK(cur.t_x == doctest::Approx(std::log(2.0 / std::sqrt(0.5))).epsilon(1e-6));
  CHECK(cur.law_gap < 1e-6);
  CHECK(cur.max_abs_alpha_dot < 1e-6);
}

TEST_CASE("Monge-Ampere solver: round cone gives the hyperboloid") {
  const auto r = solve_affine_sphere(ConvexCone::round(Vec::Unit(3, 2), M_PI / 4), 17);
  REQUIRE(r.converged);
  const auto H = hyperboloid(2, 17);
  double worst = 0.0;
  for (int k = 0; k < H.lattice().size(); ++k) {
    if (!H.lattice().valid(k) || !H.domain().contains(H.lattice().coord(k), 0.1)) continue;
    worst = std::max(worst, std::abs(r.surface.point(k).norm() / H.point(k).norm() - 1.0));
  }
  CHECK(worst < 1e-2);
  // residual history is monotone for damped Newton
  for (size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] <= r.history[i - 1]);
}

TEST_CASE("domination chain on the Titeica surface") {
  const auto T = titeica(2, 33, std::pow(3.0, -1.5));
  Vec o(2);
  o << 1.0 / 3.0, 1.0 / 3.0;
  const int k0 = T.lattice().nearest_valid(o);
  std::vector<int> xs;
  for (int k = 0; k < T.lattice().size(); k += 37)
    if (T.lattice().valid(k) && T.domain().contains(T.lattice().coord(k), 0.05)) xs.push_back(k);
  const double c = 1.1 * std::max(1.5, benoist_hulin_gap(T, k0, xs));
  const DominationReport rep = affine_domination_check(T, k0, xs, c);
  CHECK(rep.checked > 0);
  CHECK(rep.violations == 0);
  CHECK(rep.distance_violations == 0);
}
