#include "robust/forms.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace robust;
using namespace robust::forms;

TEST_CASE("bilinear form of signature (2, 1)") {
  QuadraticForm Q(2, 1);
  Vec z(3), w(3);
  z << 1, 2, 3;
  w << 4, 5, 6;
  // 1*4 + 2*5 - 3*6
  CHECK(bilinear(z, w, Q) == doctest::Approx(-4.0).epsilon(1e-15));
  CHECK(Q(z, w) == bilinear(w, z, Q));
  CHECK_THROWS_AS(bilinear(z, Vec::Zero(4), Q), std::invalid_argument);
}

TEST_CASE("boost acts on the hyperboloid by hyperbolic rotation") {
  const double t = 0.8;
  const Mat B = boost(3, 0, 2, t);
  Vec o(3);
  o << 0, 0, 1;
  const Vec x = B * o;
  CHECK(std::abs(x(0)) == doctest::Approx(std::sinh(t)).epsilon(1e-14));
  CHECK(x(1) == doctest::Approx(0.0));
  CHECK(x(2) == doctest::Approx(std::cosh(t)).epsilon(1e-14));
  CHECK(is_member(B, GroupTag::SO, QuadraticForm(2, 1)));
  CHECK_FALSE(is_member(2.0 * B, GroupTag::SO, QuadraticForm(2, 1)));
}

TEST_CASE("adjoint satisfies <phi v, u> = <v, phi^t u>") {
  QuadraticForm Q(2, 2);
  std::mt19937 rng(5);
  std::normal_distribution<double> N;
  Mat phi(4, 4);
  Vec v(4), u(4);
  for (int i = 0; i < 16; ++i) phi(i / 4, i % 4) = N(rng);
  for (int i = 0; i < 4; ++i) {
    v(i) = N(rng);
    u(i) = N(rng);
  }
  CHECK(Q(phi * v, u) == doctest::Approx(Q(v, Q.adjoint(phi) * u)).epsilon(1e-12));
}

TEST_CASE("random elements lie in their groups") {
  std::mt19937_64 rng(11);
  QuadraticForm Q(2, 2);
  for (int i = 0; i < 5; ++i) {
    CHECK(is_member(random_so(Q, rng, 0.7), GroupTag::SO, Q));
    CHECK(is_member_sl(random_sl(3, rng, 0.4)));
  }
  Mat A(2, 2);
  A << 0.3, 1.0, -0.5, -0.3;
  CHECK(sl_exp(A).determinant() == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("boost powers have a rank-one isotropic rescaled limit") {
  std::vector<Mat> seq;
  for (int n = 1; n <= 40; ++n) seq.push_back(boost(4, 0, 3, 1.0 * n));
  CHECK(is_unbounded(seq));
  const RescaledLimit lim = rescaled_limit(seq);
  REQUIRE(lim.converged);
  // (cosh, sinh; sinh, cosh) / |.|_F tends to the all-(1/2) block on coordinates 0 and 3
  const Mat& phi = lim.limit.matrix();
  CHECK(std::abs(phi(0, 0)) == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(std::abs(phi(3, 3)) == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(std::abs(phi(1, 1)) < 1e-8);
  const KernelImage ki = kernel_and_image(lim.limit);
  CHECK(ki.rank == 1);
  CHECK(ki.kernel.cols() == 3);
  const QuadraticForm Q(2, 2);
  CHECK(isotropy_defect(Q.adjoint(phi) * ki.image, Q) < 1e-8);
  CHECK(is_totally_isotropic(ki.image, Q, 1e-8));
  // samples inside the kernel are flagged, a sample outside is not
  CHECK_FALSE(avoidance_check(phi, ki.kernel));
  CHECK(avoidance_check(phi, Vec::Unit(4, 0)));
}

TEST_CASE("bounded sequences have no unbounded flag and oscillating ones no limit") {
  std::vector<Mat> bounded(10, rotation(3, 0, 1, 0.3));
  CHECK_FALSE(is_unbounded(bounded));
  std::vector<Mat> osc;
  for (int n = 1; n <= 20; ++n) osc.push_back(n % 2 ? boost(3, 0, 2, 3.0 * n) : boost(3, 1, 2, 3.0 * n));
  CHECK_FALSE(rescaled_limit(osc).converged);
}

TEST_CASE("group tags round-trip") {
  CHECK(group_tag_from_string(to_string(GroupTag::SO)) == GroupTag::SO);
  CHECK(group_tag_from_string(to_string(GroupTag::SL)) == GroupTag::SL);
  CHECK_THROWS(group_tag_from_string("GL"));
}
