#include "robust/hpq.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace robust;
using namespace robust::hpq;

TEST_CASE("Poincare map: frozen value and the quadric identity") {
  const auto model = PoincareModel::standard(1, 0);
  Vec u(1), v(1);
  u << 0.5;
  v << 1.0;
  const Vec z = poincare_embed(u, v, model);
  // 2u/(1-u^2) = 4/3 and (1+u^2)/(1-u^2) = 5/3
  CHECK(z(0) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(z(1) == doctest::Approx(5.0 / 3.0).epsilon(1e-15));

  // 4|u|^2 - (1+|u|^2)^2 = -(1-|u|^2)^2 on random samples of H^{2,1}
  const auto m21 = PoincareModel::standard(2, 1);
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> U(-0.7, 0.7), A(0, 2 * M_PI);
  for (int i = 0; i < 100; ++i) {
    Vec uu(2), vv(2);
    uu << U(rng), U(rng);
    const double a = A(rng);
    vv << std::cos(a), std::sin(a);
    const Vec zz = poincare_embed(uu, vv, m21);
    CHECK(m21.Q(zz, zz) == doctest::Approx(-1.0).epsilon(1e-12));
    const auto [u2, v2] = poincare_project(zz, m21);
    CHECK((u2 - uu).norm() < 1e-10);
    CHECK((v2 - vv).norm() < 1e-10);
  }
}

TEST_CASE("pseudo-distance: geodesic and timelike pairs") {
  const forms::QuadraticForm Q(2, 1);
  Vec o(3);
  o << 0, 0, 1;
  for (double t : {1e-6, 0.3, 2.0}) {
    const Vec x = forms::boost(3, 0, 2, t) * o;
    CHECK(pseudo_distance(o, x, Q) == doctest::Approx(t).epsilon(1e-10));
  }
  // In H^{1,1} the pairing of o with a timelike-separated point has modulus below 1.
  const forms::QuadraticForm Q11(1, 2);
  Vec a(3), b(3);
  a << 0, 1, 0;
  b << 0, std::cos(0.4), std::sin(0.4);
  CHECK(pseudo_distance(a, b, Q11) == 0.0);
}

TEST_CASE("totally geodesic and boosted graphs are maximal") {
  const auto TG = totally_geodesic(2, 1, 33, 0.9, Vec::Unit(2, 0));
  CHECK(maximality_residual(TG) < 1e-12);
  CHECK(lipschitz_constant(TG) < 1e-12);
  const auto B = boosted_totally_geodesic(33, 0.9, 0.5);
  CHECK(maximality_residual(B) < 1e-3);
  CHECK(lipschitz_constant(B) <= 1.0);
  // pushing forward by an isometry keeps the points on the quadric
  const auto M = transformed(TG, forms::boost(4, 0, 3, 0.7));
  for (const Vec& z : M.points())
    if (z.size()) CHECK(M.model().Q(z, z) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(maximality_residual(M) < 1e-10);
}

TEST_CASE("regraphing a boosted totally geodesic plane reproduces the boosted graph") {
  const double b = 0.5;
  const auto B = boosted_totally_geodesic(33, 0.9, b);
  const auto R = regraph(transformed(totally_geodesic(2, 1, 33, 0.9, Vec::Unit(2, 0)), forms::boost(4, 0, 3, b)));
  CHECK(R.transform().isIdentity(1e-15));
  double worst = 0.0;
  for (int k = 0; k < R.lattice().size(); ++k)
    if (R.lattice().valid(k) && B.lattice().valid(k)) worst = std::max(worst, (R.value(k) - B.value(k)).norm());
  CHECK(worst < 1e-3);
}

TEST_CASE("intrinsic distance on H^2 against 2 artanh r") {
  const auto M = totally_geodesic(2, 0, 65, 0.95, Vec::Ones(1));
  const int c = M.center();
  const auto d = intrinsic_distances(M, c);
  const Lattice& L = M.lattice();
  for (int k = 0; k < L.size(); ++k) {
    if (!L.valid(k) || k == c) continue;
    const double r = L.coord(k).norm();
    if (r < 0.2 || r > 0.8) continue;
    CHECK(d[k] == doctest::Approx(2.0 * std::atanh(r)).epsilon(0.02));
  }
  CHECK(intrinsic_distance(M, c, c) == 0.0);
}

TEST_CASE("lightlike rays: isometric ray graph versus totally geodesic") {
  const auto I = isometric_ray_graph(65, 0.95);
  const auto TG = totally_geodesic(2, 1, 65, 0.95, Vec::Unit(2, 0));
  bool ray = false;
  for (int i = 0; i < 8; ++i) {
    Vec dir(2);
    dir << std::cos(M_PI * i / 8), std::sin(M_PI * i / 8);
    ray = ray || detect_lightlike_ray(I, dir, 1e-3);
    CHECK_FALSE(detect_lightlike_ray(TG, dir, 1e-3));
  }
  CHECK(ray);
}

TEST_CASE("pointed comparison of a graph with itself is exact") {
  const auto B = boosted_totally_geodesic(33, 0.9, 0.3);
  const C2Gap g = pointed_c2_compare(B, B, B.center(), 1.0);
  CHECK(g.metric_c2_gap == 0.0);
  CHECK(g.embedding_gap == 0.0);
  CHECK(g.bilip == doctest::Approx(1.0));
  CHECK(g.ball_size > 1);
}
